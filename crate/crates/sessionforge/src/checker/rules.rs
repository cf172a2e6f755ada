//! Per-rule schema checks. The conclusion and premises of a node are given,
//! so checking is pattern matching plus exact context-partition and duality
//! conditions.
//!
//! Identity rules match the two forwarder arguments symmetrically: the
//! forwarder fuses its channels, and fixing one orientation would break
//! progress on cuts whose bound name is the second argument.
//!
//! Intuitionistic nodes are checked through the ★-embedding: an `|-i`
//! judgment is a two-sided judgment with a singleton right region, and the
//! Fig. 4 schemas are exactly the ∗-marked two-sided schemas under that
//! reading (`id` ↦ `idR`, `copy` ↦ `copyL`).

use crate::ast::{Branches, Context, Judgment, Name, Process, TypeExpr};

use super::{Config, Derivation, RuleName};

type Check = Result<(), String>;

fn err(msg: impl Into<String>) -> Check {
    Err(msg.into())
}

#[derive(Clone)]
struct Ull {
    gamma: Context,
    delta: Context,
    process: Process,
    lambda: Context,
}

fn as_ull(j: &Judgment) -> Result<Ull, String> {
    match j {
        Judgment::Ull {
            gamma,
            delta,
            process,
            lambda,
        } => Ok(Ull {
            gamma: gamma.clone(),
            delta: delta.clone(),
            process: process.clone(),
            lambda: lambda.clone(),
        }),
        Judgment::Ill {
            gamma,
            delta,
            process,
            right_name,
            right_type,
        } => Ok(Ull {
            gamma: gamma.clone(),
            delta: delta.clone(),
            process: process.clone(),
            lambda: Context::singleton(right_name.clone(), right_type.clone()),
        }),
        _ => Err("expected a two-sided judgment".into()),
    }
}

struct Cll {
    process: Process,
    gamma: Context,
    delta: Context,
}

fn as_cll(j: &Judgment) -> Result<Cll, String> {
    match j {
        Judgment::Cll {
            process,
            gamma,
            delta,
        } => Ok(Cll {
            process: process.clone(),
            gamma: gamma.clone(),
            delta: delta.clone(),
        }),
        _ => Err("expected a one-sided judgment".into()),
    }
}

/// `ν y x⟨y⟩.(P ‖ Q)` — the bound send.
pub(crate) fn send_composite(p: &Process) -> Option<(&Name, &Name, &Process, &Process)> {
    if let Process::Restrict { name, body, .. } = p {
        if let Process::Output {
            channel,
            payload,
            body: cont,
        } = &**body
        {
            if payload == name {
                if let Process::Par(a, b) = &**cont {
                    return Some((channel, payload, a, b));
                }
            }
        }
    }
    None
}

/// `ν x u⟨x⟩.P` — the client request (any continuation shape).
pub(crate) fn copy_shape(p: &Process) -> Option<(&Name, &Name, &Process)> {
    if let Process::Restrict { name, body, .. } = p {
        if let Process::Output {
            channel,
            payload,
            body: cont,
        } = &**body
        {
            if payload == name {
                return Some((channel, payload, cont));
            }
        }
    }
    None
}

/// `ν x (P ‖ Q)` — the cut shape, plus the annotation if any.
pub(crate) fn cut_shape(p: &Process) -> Option<(&Name, Option<&TypeExpr>, &Process, &Process)> {
    if let Process::Restrict {
        name,
        annotation,
        body,
    } = p
    {
        if let Process::Par(a, b) = &**body {
            return Some((name, annotation.as_ref(), a, b));
        }
    }
    None
}

/// `ν xy P` for the cycle stubs, encoded as two nested restrictions.
fn cycle_shape(p: &Process) -> Option<(&Name, &Name, &Process)> {
    if let Process::Restrict { name: a, body, .. } = p {
        if let Process::Restrict {
            name: b,
            body: inner,
            ..
        } = &**body
        {
            return Some((a, b, inner));
        }
    }
    None
}

fn eq_ctx(what: &str, got: &Context, want: &Context) -> Check {
    if got == want {
        Ok(())
    } else {
        err(format!("{what} region does not match the schema"))
    }
}

fn eq_proc(what: &str, got: &Process, want: &Process) -> Check {
    if got == want {
        Ok(())
    } else {
        err(format!("{what} process does not match the conclusion"))
    }
}

/// Exact partition: `whole == a ∪ b` with `a`/`b` disjoint.
fn partition(what: &str, whole: &Context, a: &Context, b: &Context) -> Check {
    if !a.disjoint(b) {
        return err(format!("{what}: premise regions overlap"));
    }
    if &a.union(b) == whole {
        Ok(())
    } else {
        err(format!(
            "{what}: premise regions do not partition the conclusion's"
        ))
    }
}

fn annotation_matches(ann: Option<&TypeExpr>, a: &TypeExpr) -> Check {
    match ann {
        None => Ok(()),
        Some(t) if t == a || *t == a.dual() => Ok(()),
        Some(_) => err("restriction annotation does not match the cut type"),
    }
}

fn arm_types<'t>(
    arms: &[(String, Process)],
    bs: &'t Branches,
) -> Result<Vec<&'t TypeExpr>, String> {
    if arms.len() != bs.len() {
        return Err("branch arms and type labels differ".into());
    }
    let mut out = Vec::new();
    for (l, _) in arms {
        match bs.get(l) {
            Some(t) => out.push(t),
            None => return Err(format!("branch label {l} missing from the type")),
        }
    }
    Ok(out)
}

pub fn check_node(d: &Derivation, config: &Config) -> Check {
    match &d.conclusion {
        Judgment::Ull { .. } => {
            let c = as_ull(&d.conclusion)?;
            let ps: Vec<Ull> = d
                .premises
                .iter()
                .map(|p| as_ull(&p.conclusion))
                .collect::<Result<_, _>>()?;
            check_two_sided(d.rule, &c, &ps, config)
        }
        Judgment::Ill { .. } => {
            // ★-embedding: map the rule name, keep the schemas
            let rule = match d.rule {
                RuleName::Id => RuleName::IdR,
                RuleName::Copy => RuleName::CopyL,
                other => other,
            };
            let c = as_ull(&d.conclusion)?;
            let ps: Vec<Ull> = d
                .premises
                .iter()
                .map(|p| as_ull(&p.conclusion))
                .collect::<Result<_, _>>()?;
            check_two_sided(rule, &c, &ps, config)
        }
        Judgment::Cll { .. } => {
            let c = as_cll(&d.conclusion)?;
            let ps: Vec<Cll> = d
                .premises
                .iter()
                .map(|p| as_cll(&p.conclusion))
                .collect::<Result<_, _>>()?;
            check_one_sided(d.rule, &c, &ps, config)
        }
    }
}

fn check_two_sided(rule: RuleName, c: &Ull, ps: &[Ull], config: &Config) -> Check {
    use RuleName::*;
    match rule {
        IdR => {
            let (a, b) = match &c.process {
                Process::Forward(a, b) => (a, b),
                _ => return err("idR types a forwarder"),
            };
            if a == b {
                return err("forwarder arguments must be distinct");
            }
            if c.delta.len() != 1 || c.lambda.len() != 1 {
                return err("idR needs exactly one assignment on each side");
            }
            let (ln, lt) = c.delta.iter().next().unwrap();
            let (rn, rt) = c.lambda.iter().next().unwrap();
            let args_ok = (ln == a && rn == b) || (ln == b && rn == a);
            if !args_ok {
                return err("idR assignments must name the forwarder channels");
            }
            if lt != rt {
                return err("idR requires the same type on both sides");
            }
            Ok(())
        }
        IdL => {
            let (a, b) = match &c.process {
                Process::Forward(a, b) => (a, b),
                _ => return err("idL types a forwarder"),
            };
            if a == b {
                return err("forwarder arguments must be distinct");
            }
            if !c.lambda.is_empty() {
                return err("idL requires an empty right region");
            }
            if c.delta.len() != 2 {
                return err("idL needs exactly the two forwarder channels on the left");
            }
            let (ta, tb) = match (c.delta.get(a), c.delta.get(b)) {
                (Some(ta), Some(tb)) => (ta, tb),
                _ => return err("idL assignments must name the forwarder channels"),
            };
            if *tb != ta.dual() {
                return err("idL requires dual types");
            }
            Ok(())
        }
        OneR => {
            let x = match &c.process {
                Process::CloseOut(x) => x,
                _ => return err("1R types an empty send"),
            };
            if !c.delta.is_empty() {
                return err("1R requires an empty linear left region");
            }
            if c.lambda.len() != 1 || c.lambda.get(x) != Some(&TypeExpr::One) {
                return err("1R concludes exactly x:1 on the right");
            }
            Ok(())
        }
        BotL => {
            let x = match &c.process {
                Process::CloseOut(x) => x,
                _ => return err("botL types an empty send"),
            };
            if !c.lambda.is_empty() {
                return err("botL requires an empty right region");
            }
            if c.delta.len() != 1 || c.delta.get(x) != Some(&TypeExpr::Bot) {
                return err("botL concludes exactly x:bot on the left");
            }
            Ok(())
        }
        OneL | BotR => {
            let p = &ps[0];
            let (x, body) = match &c.process {
                Process::WaitIn { channel, body } => (channel, &**body),
                _ => return err("empty receives are typed by 1L/botR"),
            };
            eq_ctx("gamma", &p.gamma, &c.gamma)?;
            eq_proc("premise", &p.process, body)?;
            if rule == OneL {
                let (rest, t) = c
                    .delta
                    .remove(x)
                    .ok_or_else(|| format!("{x} must appear on the left"))?;
                if t != TypeExpr::One {
                    return err("1L requires x:1");
                }
                eq_ctx("delta", &p.delta, &rest)?;
                eq_ctx("lambda", &p.lambda, &c.lambda)
            } else {
                let (rest, t) = c
                    .lambda
                    .remove(x)
                    .ok_or_else(|| format!("{x} must appear on the right"))?;
                if t != TypeExpr::Bot {
                    return err("botR requires x:bot");
                }
                eq_ctx("delta", &p.delta, &c.delta)?;
                eq_ctx("lambda", &p.lambda, &rest)
            }
        }
        TensorL | ParR | LolliR => {
            let p = &ps[0];
            let (x, y, body) = match &c.process {
                Process::Input {
                    channel,
                    binder,
                    body,
                } => (channel, binder, &**body),
                _ => return err("receives are typed by tensorL/parR/lolliR"),
            };
            eq_ctx("gamma", &p.gamma, &c.gamma)?;
            eq_proc("premise", &p.process, body)?;
            match rule {
                TensorL => {
                    let (rest, t) = c
                        .delta
                        .remove(x)
                        .ok_or_else(|| format!("{x} must appear on the left"))?;
                    let (a, b) = match t {
                        TypeExpr::Tensor(a, b) => (*a, *b),
                        _ => return err("tensorL requires a tensor type"),
                    };
                    eq_ctx(
                        "delta",
                        &p.delta,
                        &rest.extended(y.clone(), a).extended(x.clone(), b),
                    )?;
                    eq_ctx("lambda", &p.lambda, &c.lambda)
                }
                ParR => {
                    let (rest, t) = c
                        .lambda
                        .remove(x)
                        .ok_or_else(|| format!("{x} must appear on the right"))?;
                    // A ⅋ B is Lolli(¬A, B): the payload carries ¬(left arg)
                    let (a, b) = match t {
                        TypeExpr::Lolli(cc, b) => (cc.dual(), *b),
                        _ => return err("parR requires a par type"),
                    };
                    eq_ctx("delta", &p.delta, &c.delta)?;
                    eq_ctx(
                        "lambda",
                        &p.lambda,
                        &rest.extended(y.clone(), a).extended(x.clone(), b),
                    )
                }
                LolliR => {
                    let (rest, t) = c
                        .lambda
                        .remove(x)
                        .ok_or_else(|| format!("{x} must appear on the right"))?;
                    let (a, b) = match t {
                        TypeExpr::Lolli(a, b) => (*a, *b),
                        _ => return err("lolliR requires a lolli type"),
                    };
                    eq_ctx("delta", &p.delta, &c.delta.extended(y.clone(), a))?;
                    eq_ctx("lambda", &p.lambda, &rest.extended(x.clone(), b))
                }
                _ => unreachable!(),
            }
        }
        PlusR | WithL => {
            let p = &ps[0];
            let (x, j, body) = match &c.process {
                Process::Select {
                    channel,
                    label,
                    body,
                } => (channel, label, &**body),
                _ => return err("selections are typed by plusR/withL"),
            };
            eq_ctx("gamma", &p.gamma, &c.gamma)?;
            eq_proc("premise", &p.process, body)?;
            if rule == PlusR {
                let (rest, t) = c
                    .lambda
                    .remove(x)
                    .ok_or_else(|| format!("{x} must appear on the right"))?;
                let bs = match t {
                    TypeExpr::Plus(bs) => bs,
                    _ => return err("plusR requires a plus type"),
                };
                let aj = bs
                    .get(j)
                    .ok_or_else(|| format!("label {j} is not offered by the type"))?;
                eq_ctx("delta", &p.delta, &c.delta)?;
                eq_ctx("lambda", &p.lambda, &rest.extended(x.clone(), aj.clone()))
            } else {
                let (rest, t) = c
                    .delta
                    .remove(x)
                    .ok_or_else(|| format!("{x} must appear on the left"))?;
                let bs = match t {
                    TypeExpr::With(bs) => bs,
                    _ => return err("withL requires a with type"),
                };
                let aj = bs
                    .get(j)
                    .ok_or_else(|| format!("label {j} is not offered by the type"))?;
                eq_ctx("delta", &p.delta, &rest.extended(x.clone(), aj.clone()))?;
                eq_ctx("lambda", &p.lambda, &c.lambda)
            }
        }
        PlusL | WithR => {
            let (x, arms) = match &c.process {
                Process::Branch { channel, arms } => (channel, arms),
                _ => return err("branches are typed by plusL/withR"),
            };
            let right = rule == WithR;
            let (rest, t) = if right {
                c.lambda
                    .remove(x)
                    .ok_or_else(|| format!("{x} must appear on the right"))?
            } else {
                c.delta
                    .remove(x)
                    .ok_or_else(|| format!("{x} must appear on the left"))?
            };
            let bs = match (&t, right) {
                (TypeExpr::Plus(bs), false) => bs,
                (TypeExpr::With(bs), true) => bs,
                _ => return err("branching type has the wrong connective"),
            };
            let tys = arm_types(arms, bs)?;
            if ps.len() != arms.len() {
                return err("one premise per branch arm expected");
            }
            for (((arm_label, arm_proc), ty), p) in arms.iter().zip(tys).zip(ps) {
                let _ = arm_label;
                eq_ctx("gamma", &p.gamma, &c.gamma)?;
                if right {
                    eq_ctx("delta", &p.delta, &c.delta)?;
                    eq_ctx("lambda", &p.lambda, &rest.extended(x.clone(), ty.clone()))?;
                } else {
                    eq_ctx("delta", &p.delta, &rest.extended(x.clone(), ty.clone()))?;
                    eq_ctx("lambda", &p.lambda, &c.lambda)?;
                }
                eq_proc("arm premise", &p.process, arm_proc)?;
            }
            Ok(())
        }
        CopyR | CopyL => {
            let p = &ps[0];
            let (u, x, body) = copy_shape(&c.process)
                .ok_or_else(|| "copy rules type a client request".to_string())?;
            let a = c
                .gamma
                .get(u)
                .ok_or_else(|| format!("{u} must be unrestricted"))?
                .clone();
            eq_ctx("gamma", &p.gamma, &c.gamma)?;
            eq_proc("premise", &p.process, body)?;
            if rule == CopyL {
                eq_ctx("delta", &p.delta, &c.delta.extended(x.clone(), a))?;
                eq_ctx("lambda", &p.lambda, &c.lambda)
            } else {
                eq_ctx("delta", &p.delta, &c.delta)?;
                eq_ctx("lambda", &p.lambda, &c.lambda.extended(x.clone(), a.dual()))
            }
        }
        BangR => {
            let p = &ps[0];
            let (x, y, body) = match &c.process {
                Process::Server {
                    channel,
                    binder,
                    body,
                } => (channel, binder, &**body),
                _ => return err("bangR types a replicated receive"),
            };
            if !c.delta.is_empty() {
                return err("bangR requires an empty linear left region");
            }
            let a = match c.lambda.get(x) {
                Some(TypeExpr::Bang(a)) if c.lambda.len() == 1 => (**a).clone(),
                _ => return err("bangR concludes exactly x:!A on the right"),
            };
            eq_ctx("gamma", &p.gamma, &c.gamma)?;
            if !p.delta.is_empty() {
                return err("bangR premise requires an empty linear left region");
            }
            eq_ctx("lambda", &p.lambda, &Context::singleton(y.clone(), a))?;
            eq_proc("premise", &p.process, body)
        }
        QueryL => {
            let p = &ps[0];
            let (x, y, body) = match &c.process {
                Process::Server {
                    channel,
                    binder,
                    body,
                } => (channel, binder, &**body),
                _ => return err("queryL types a replicated receive"),
            };
            if !c.lambda.is_empty() || !p.lambda.is_empty() {
                return err("queryL requires empty right regions");
            }
            let a = match c.delta.get(x) {
                Some(TypeExpr::Query(a)) if c.delta.len() == 1 => (**a).clone(),
                _ => return err("queryL concludes exactly x:?A on the left"),
            };
            eq_ctx("gamma", &p.gamma, &c.gamma)?;
            eq_ctx("delta", &p.delta, &Context::singleton(y.clone(), a))?;
            eq_proc("premise", &p.process, body)
        }
        BangL | QueryR => {
            let p = &ps[0];
            let extra = p
                .gamma
                .subtract(&c.gamma)
                .ok_or_else(|| "premise gamma must extend the conclusion gamma".to_string())?;
            if extra.len() != 1 {
                return err("exactly one unrestricted assignment is introduced");
            }
            let (u, a) = extra.iter().next().unwrap().clone();
            eq_proc_sub(rule, c, p, &u, &a)
        }
        CutRL | CutLR | CutRR | CutLL => {
            let (x, ann, left, right) =
                cut_shape(&c.process).ok_or_else(|| "cuts type ν x (P ‖ Q)".to_string())?;
            let p1 = &ps[0];
            let p2 = &ps[1];
            eq_ctx("gamma", &p1.gamma, &c.gamma)?;
            eq_ctx("gamma", &p2.gamma, &c.gamma)?;
            eq_proc("left premise", &p1.process, left)?;
            eq_proc("right premise", &p2.process, right)?;
            let p1_right = matches!(rule, CutRL | CutRR);
            let p2_right = matches!(rule, CutLR | CutRR);
            let (d1, l1, a1) = split_cut_side(p1, x, p1_right)?;
            let (d2, l2, a2) = split_cut_side(p2, x, p2_right)?;
            let dual_ok = match rule {
                CutRL | CutLR => a1 == a2,
                CutRR | CutLL => a2 == a1.dual(),
                _ => unreachable!(),
            };
            if !dual_ok {
                return err("cut premise types do not satisfy the duality condition");
            }
            annotation_matches(ann, &a1)?;
            partition("delta", &c.delta, &d1, &d2)?;
            partition("lambda", &c.lambda, &l1, &l2)
        }
        CutBangR | CutBangL | CutQueryR | CutQueryL => {
            let (u, ann, left, right) = cut_shape(&c.process)
                .ok_or_else(|| "unrestricted cuts type ν u (P ‖ Q)".to_string())?;
            let server_left = matches!(rule, CutBangL | CutQueryL);
            let (client, server) = if server_left { (right, left) } else { (left, right) };
            let (sx, sbody) = match server {
                Process::Server {
                    channel,
                    binder,
                    body,
                } if channel == u => (binder, &**body),
                _ => return err("the server component must replicate on the cut channel"),
            };
            let (pc, psrv) = if server_left {
                (&ps[1], &ps[0])
            } else {
                (&ps[0], &ps[1])
            };
            eq_proc("client premise", &pc.process, client)?;
            eq_proc("server premise", &psrv.process, sbody)?;
            let extra = pc
                .gamma
                .subtract(&c.gamma)
                .ok_or_else(|| "client gamma must extend the conclusion gamma".to_string())?;
            if extra.len() != 1 || extra.get(u).is_none() {
                return err("client premise must add exactly u:A to gamma");
            }
            let a = extra.get(u).unwrap().clone();
            annotation_matches(ann, &a)?;
            eq_ctx("server gamma", &psrv.gamma, &c.gamma)?;
            eq_ctx("client delta", &pc.delta, &c.delta)?;
            eq_ctx("client lambda", &pc.lambda, &c.lambda)?;
            if matches!(rule, CutBangR | CutBangL) {
                if !psrv.delta.is_empty() {
                    return err("server premise requires an empty linear left region");
                }
                eq_ctx(
                    "server lambda",
                    &psrv.lambda,
                    &Context::singleton(sx.clone(), a),
                )
            } else {
                if !psrv.lambda.is_empty() {
                    return err("server premise requires an empty right region");
                }
                eq_ctx(
                    "server delta",
                    &psrv.delta,
                    &Context::singleton(sx.clone(), a.dual()),
                )
            }
        }
        MoveL => {
            if config.system != crate::ast::System::Ullm {
                return err("moves belong to the ↷-presentation only");
            }
            let p = &ps[0];
            eq_ctx("gamma", &p.gamma, &c.gamma)?;
            eq_proc("premise", &p.process, &c.process)?;
            for (x, t) in p.lambda.iter() {
                if c.lambda.get(x).is_none() {
                    let (rest, _) = p.lambda.remove(x).unwrap();
                    eq_ctx("lambda", &rest, &c.lambda)?;
                    return eq_ctx("delta", &c.delta, &p.delta.extended(x.clone(), t.dual()));
                }
            }
            err("no moved assignment found")
        }
        MoveR => {
            if config.system != crate::ast::System::Ullm {
                return err("moves belong to the ↷-presentation only");
            }
            let p = &ps[0];
            eq_ctx("gamma", &p.gamma, &c.gamma)?;
            eq_proc("premise", &p.process, &c.process)?;
            for (x, t) in p.delta.iter() {
                if c.delta.get(x).is_none() {
                    let (rest, _) = p.delta.remove(x).unwrap();
                    eq_ctx("delta", &rest, &c.delta)?;
                    return eq_ctx("lambda", &c.lambda, &p.lambda.extended(x.clone(), t.dual()));
                }
            }
            err("no moved assignment found")
        }
        Mix => {
            let (left, right) = match &c.process {
                Process::Par(a, b) => (&**a, &**b),
                _ => return err("mix types a bare parallel composition"),
            };
            let p1 = &ps[0];
            let p2 = &ps[1];
            eq_ctx("gamma", &p1.gamma, &c.gamma)?;
            eq_ctx("gamma", &p2.gamma, &c.gamma)?;
            eq_proc("left premise", &p1.process, left)?;
            eq_proc("right premise", &p2.process, right)?;
            partition("delta", &c.delta, &p1.delta, &p2.delta)?;
            partition("lambda", &c.lambda, &p1.lambda, &p2.lambda)
        }
        Empty => {
            if !matches!(c.process, Process::Inact) {
                return err("empty types the inactive process");
            }
            if !c.delta.is_empty() || !c.lambda.is_empty() {
                return err("empty requires empty linear regions");
            }
            Ok(())
        }
        CycleRL | CycleLR | CycleRR | CycleLL => {
            let p = &ps[0];
            let (n1, n2, inner) = cycle_shape(&c.process)
                .ok_or_else(|| "cycle rules type ν xy P (two nested restrictions)".to_string())?;
            eq_ctx("gamma", &p.gamma, &c.gamma)?;
            eq_proc("premise", &p.process, inner)?;
            let ok = match rule {
                // cycleRL: ν{y x}P with x:A on the left, y:A on the right
                CycleRL | CycleLR => {
                    let (x, y) = if rule == CycleRL { (n2, n1) } else { (n1, n2) };
                    match (p.delta.remove(x), p.lambda.remove(y)) {
                        (Some((dr, a)), Some((lr, b))) => {
                            a == b && dr == c.delta && lr == c.lambda
                        }
                        _ => false,
                    }
                }
                CycleRR => match p.lambda.remove(n1).and_then(|(r, a)| {
                    r.remove(n2).map(|(r2, b)| (r2, a, b))
                }) {
                    Some((r2, a, b)) => p.delta == c.delta && b == a.dual() && r2 == c.lambda,
                    None => false,
                },
                CycleLL => match p.delta.remove(n1).and_then(|(r, a)| {
                    r.remove(n2).map(|(r2, b)| (r2, a, b))
                }) {
                    Some((r2, a, b)) => p.lambda == c.lambda && b == a.dual() && r2 == c.delta,
                    None => false,
                },
                _ => unreachable!(),
            };
            if !ok {
                return err("cycle endpoints do not match the schema");
            }
            cycle_predicate(config, &Judgment::Ull {
                gamma: c.gamma.clone(),
                delta: c.delta.clone(),
                process: c.process.clone(),
                lambda: c.lambda.clone(),
            })
        }
        Id | Copy | CllOne | CllBot | CllTensor | CllPar | CllPlus | CllWith | CllBang
        | CllQuery | CllCut | CllCycle => err(format!(
            "rule {rule} does not apply to two-sided judgments"
        )),
    }
}

/// The substitution rules `!L` and `?R`: the conclusion process is the
/// premise process under `{x/u}` for the consumed assignment `x`.
fn eq_proc_sub(rule: RuleName, c: &Ull, p: &Ull, u: &str, a: &TypeExpr) -> Check {
    let candidates: Vec<Name> = if rule == RuleName::BangL {
        c.delta
            .iter()
            .filter(|(_, t)| *t == TypeExpr::bang(a.clone()))
            .map(|(n, _)| n.clone())
            .collect()
    } else {
        let want = TypeExpr::query(a.dual());
        c.lambda
            .iter()
            .filter(|(_, t)| *t == want)
            .map(|(n, _)| n.clone())
            .collect()
    };
    for x in candidates {
        let regions_ok = if rule == RuleName::BangL {
            let (rest, _) = c.delta.remove(&x).unwrap();
            p.delta == rest && p.lambda == c.lambda
        } else {
            let (rest, _) = c.lambda.remove(&x).unwrap();
            p.lambda == rest && p.delta == c.delta
        };
        if regions_ok && p.process.substitute(&x, u).alpha_eq(&c.process) {
            return Ok(());
        }
    }
    err(match rule {
        RuleName::BangL => "no x:!A assignment matches the premise under {x/u}",
        _ => "no x:?¬A assignment matches the premise under {x/u}",
    })
}

fn split_cut_side(p: &Ull, x: &str, on_right: bool) -> Result<(Context, Context, TypeExpr), String> {
    if on_right {
        let (rest, a) = p
            .lambda
            .remove(x)
            .ok_or_else(|| format!("cut channel {x} missing on the right of a premise"))?;
        Ok((p.delta.clone(), rest, a))
    } else {
        let (rest, a) = p
            .delta
            .remove(x)
            .ok_or_else(|| format!("cut channel {x} missing on the left of a premise"))?;
        Ok((rest, p.lambda.clone(), a))
    }
}

fn cycle_predicate(config: &Config, j: &Judgment) -> Check {
    match config.cycle_predicate {
        Some(phi) if phi(j) => Ok(()),
        Some(_) => err("cycle side condition φ rejected the application"),
        None => err("cycle side condition φ rejected the application (no predicate installed)"),
    }
}

fn check_one_sided(rule: RuleName, c: &Cll, ps: &[Cll], config: &Config) -> Check {
    use RuleName::*;
    match rule {
        Id => {
            let (a, b) = match &c.process {
                Process::Forward(a, b) => (a, b),
                _ => return err("id types a forwarder"),
            };
            if a == b {
                return err("forwarder arguments must be distinct");
            }
            if c.delta.len() != 2 {
                return err("id needs exactly the two forwarder channels");
            }
            let (ta, tb) = match (c.delta.get(a), c.delta.get(b)) {
                (Some(ta), Some(tb)) => (ta, tb),
                _ => return err("id assignments must name the forwarder channels"),
            };
            if *tb != ta.dual() {
                return err("id requires dual types");
            }
            Ok(())
        }
        CllOne => {
            let x = match &c.process {
                Process::CloseOut(x) => x,
                _ => return err("1 types an empty send"),
            };
            if c.delta.len() != 1 || c.delta.get(x) != Some(&TypeExpr::One) {
                return err("1 concludes exactly x:1");
            }
            Ok(())
        }
        CllBot => {
            let p = &ps[0];
            let (x, body) = match &c.process {
                Process::WaitIn { channel, body } => (channel, &**body),
                _ => return err("bot types an empty receive"),
            };
            let (rest, t) = c
                .delta
                .remove(x)
                .ok_or_else(|| format!("{x} must be assigned"))?;
            if t != TypeExpr::Bot {
                return err("bot requires x:bot");
            }
            eq_ctx("gamma", &p.gamma, &c.gamma)?;
            eq_ctx("delta", &p.delta, &rest)?;
            eq_proc("premise", &p.process, body)
        }
        CllTensor => {
            let (x, y, left, right) = send_composite(&c.process)
                .ok_or_else(|| "tensor types ν y x⟨y⟩.(P ‖ Q)".to_string())?;
            let p1 = &ps[0];
            let p2 = &ps[1];
            eq_ctx("gamma", &p1.gamma, &c.gamma)?;
            eq_ctx("gamma", &p2.gamma, &c.gamma)?;
            eq_proc("payload premise", &p1.process, left)?;
            eq_proc("continuation premise", &p2.process, right)?;
            let (d1, a) = p1
                .delta
                .remove(y)
                .ok_or_else(|| "payload must be assigned in the first premise".to_string())?;
            let (d2, b) = p2
                .delta
                .remove(x)
                .ok_or_else(|| "continuation must be assigned in the second premise".to_string())?;
            let (rest, t) = c
                .delta
                .remove(x)
                .ok_or_else(|| format!("{x} must be assigned"))?;
            if t != TypeExpr::tensor(a, b) {
                return err("tensor conclusion type must be A ⊗ B");
            }
            partition("delta", &rest, &d1, &d2)
        }
        CllPar => {
            let p = &ps[0];
            let (x, y, body) = match &c.process {
                Process::Input {
                    channel,
                    binder,
                    body,
                } => (channel, binder, &**body),
                _ => return err("par types a receive"),
            };
            let (rest, t) = c
                .delta
                .remove(x)
                .ok_or_else(|| format!("{x} must be assigned"))?;
            let (a, b) = match t {
                TypeExpr::Lolli(cc, b) => (cc.dual(), *b),
                _ => return err("par requires a par type"),
            };
            eq_ctx("gamma", &p.gamma, &c.gamma)?;
            eq_ctx(
                "delta",
                &p.delta,
                &rest.extended(y.clone(), a).extended(x.clone(), b),
            )?;
            eq_proc("premise", &p.process, body)
        }
        CllPlus => {
            let p = &ps[0];
            let (x, j, body) = match &c.process {
                Process::Select {
                    channel,
                    label,
                    body,
                } => (channel, label, &**body),
                _ => return err("plus types a selection"),
            };
            let (rest, t) = c
                .delta
                .remove(x)
                .ok_or_else(|| format!("{x} must be assigned"))?;
            let bs = match t {
                TypeExpr::Plus(bs) => bs,
                _ => return err("plus requires a plus type"),
            };
            let aj = bs
                .get(j)
                .ok_or_else(|| format!("label {j} is not offered by the type"))?;
            eq_ctx("gamma", &p.gamma, &c.gamma)?;
            eq_ctx("delta", &p.delta, &rest.extended(x.clone(), aj.clone()))?;
            eq_proc("premise", &p.process, body)
        }
        CllWith => {
            let (x, arms) = match &c.process {
                Process::Branch { channel, arms } => (channel, arms),
                _ => return err("with types a branch"),
            };
            let (rest, t) = c
                .delta
                .remove(x)
                .ok_or_else(|| format!("{x} must be assigned"))?;
            let bs = match &t {
                TypeExpr::With(bs) => bs,
                _ => return err("with requires a with type"),
            };
            let tys = arm_types(arms, bs)?;
            if ps.len() != arms.len() {
                return err("one premise per branch arm expected");
            }
            for (((_, arm_proc), ty), p) in arms.iter().zip(tys).zip(ps) {
                eq_ctx("gamma", &p.gamma, &c.gamma)?;
                eq_ctx("delta", &p.delta, &rest.extended(x.clone(), ty.clone()))?;
                eq_proc("arm premise", &p.process, arm_proc)?;
            }
            Ok(())
        }
        Copy => {
            let p = &ps[0];
            let (u, y, body) = copy_shape(&c.process)
                .ok_or_else(|| "copy types a client request".to_string())?;
            let a = c
                .gamma
                .get(u)
                .ok_or_else(|| format!("{u} must be unrestricted"))?
                .clone();
            eq_ctx("gamma", &p.gamma, &c.gamma)?;
            eq_ctx("delta", &p.delta, &c.delta.extended(y.clone(), a))?;
            eq_proc("premise", &p.process, body)
        }
        CllBang => {
            let p = &ps[0];
            let (x, y, body) = match &c.process {
                Process::Server {
                    channel,
                    binder,
                    body,
                } => (channel, binder, &**body),
                _ => return err("bang types a replicated receive"),
            };
            let a = match c.delta.get(x) {
                Some(TypeExpr::Bang(a)) if c.delta.len() == 1 => (**a).clone(),
                _ => return err("bang concludes exactly x:!A"),
            };
            eq_ctx("gamma", &p.gamma, &c.gamma)?;
            eq_ctx("delta", &p.delta, &Context::singleton(y.clone(), a))?;
            eq_proc("premise", &p.process, body)
        }
        CllQuery => {
            let p = &ps[0];
            let extra = p
                .gamma
                .subtract(&c.gamma)
                .ok_or_else(|| "premise gamma must extend the conclusion gamma".to_string())?;
            if extra.len() != 1 {
                return err("exactly one unrestricted assignment is introduced");
            }
            let (u, a) = extra.iter().next().unwrap().clone();
            let want = TypeExpr::query(a.clone());
            let candidates: Vec<Name> = c
                .delta
                .iter()
                .filter(|(_, t)| *t == want)
                .map(|(n, _)| n.clone())
                .collect();
            for x in candidates {
                let (rest, _) = c.delta.remove(&x).unwrap();
                if p.delta == rest && p.process.substitute(&x, &u).alpha_eq(&c.process) {
                    return Ok(());
                }
            }
            err("no x:?A assignment matches the premise under {x/u}")
        }
        CllCut => {
            let (x, ann, left, right) =
                cut_shape(&c.process).ok_or_else(|| "cut types ν x (P ‖ Q)".to_string())?;
            let p1 = &ps[0];
            let p2 = &ps[1];
            eq_ctx("gamma", &p1.gamma, &c.gamma)?;
            eq_ctx("gamma", &p2.gamma, &c.gamma)?;
            eq_proc("left premise", &p1.process, left)?;
            eq_proc("right premise", &p2.process, right)?;
            let (d1, a1) = p1
                .delta
                .remove(x)
                .ok_or_else(|| format!("cut channel {x} missing in the first premise"))?;
            let (d2, a2) = p2
                .delta
                .remove(x)
                .ok_or_else(|| format!("cut channel {x} missing in the second premise"))?;
            if a2 != a1.dual() {
                return err("cut premise types must be dual");
            }
            annotation_matches(ann, &a1)?;
            partition("delta", &c.delta, &d1, &d2)
        }
        CutQueryR | CutQueryL => {
            let (u, ann, left, right) = cut_shape(&c.process)
                .ok_or_else(|| "unrestricted cuts type ν u (P ‖ Q)".to_string())?;
            let server_left = rule == CutQueryL;
            let (client, server) = if server_left { (right, left) } else { (left, right) };
            let (sx, sbody) = match server {
                Process::Server {
                    channel,
                    binder,
                    body,
                } if channel == u => (binder, &**body),
                _ => return err("the server component must replicate on the cut channel"),
            };
            let (pc, psrv) = if server_left {
                (&ps[1], &ps[0])
            } else {
                (&ps[0], &ps[1])
            };
            eq_proc("client premise", &pc.process, client)?;
            eq_proc("server premise", &psrv.process, sbody)?;
            let extra = pc
                .gamma
                .subtract(&c.gamma)
                .ok_or_else(|| "client gamma must extend the conclusion gamma".to_string())?;
            if extra.len() != 1 || extra.get(u).is_none() {
                return err("client premise must add exactly u:A to gamma");
            }
            let a = extra.get(u).unwrap().clone();
            annotation_matches(ann, &a)?;
            eq_ctx("server gamma", &psrv.gamma, &c.gamma)?;
            eq_ctx("client delta", &pc.delta, &c.delta)?;
            eq_ctx(
                "server delta",
                &psrv.delta,
                &Context::singleton(sx.clone(), a.dual()),
            )
        }
        Mix => {
            let (left, right) = match &c.process {
                Process::Par(a, b) => (&**a, &**b),
                _ => return err("mix types a bare parallel composition"),
            };
            let p1 = &ps[0];
            let p2 = &ps[1];
            eq_ctx("gamma", &p1.gamma, &c.gamma)?;
            eq_ctx("gamma", &p2.gamma, &c.gamma)?;
            eq_proc("left premise", &p1.process, left)?;
            eq_proc("right premise", &p2.process, right)?;
            partition("delta", &c.delta, &p1.delta, &p2.delta)
        }
        Empty => {
            if !matches!(c.process, Process::Inact) {
                return err("empty types the inactive process");
            }
            if !c.delta.is_empty() {
                return err("empty requires an empty linear region");
            }
            Ok(())
        }
        CllCycle => {
            let p = &ps[0];
            let (x, y, inner) = cycle_shape(&c.process)
                .ok_or_else(|| "cycle types ν xy P (two nested restrictions)".to_string())?;
            eq_ctx("gamma", &p.gamma, &c.gamma)?;
            eq_proc("premise", &p.process, inner)?;
            let ok = match p.delta.remove(x).and_then(|(r, a)| {
                r.remove(y).map(|(r2, b)| (r2, a, b))
            }) {
                Some((r2, a, b)) => b == a.dual() && r2 == c.delta,
                None => false,
            };
            if !ok {
                return err("cycle endpoints do not match the schema");
            }
            cycle_predicate(config, &Judgment::Cll {
                process: c.process.clone(),
                gamma: c.gamma.clone(),
                delta: c.delta.clone(),
            })
        }
        _ => err(format!("rule {rule} does not apply to one-sided judgments")),
    }
}
