//! Goal-directed inference with ordered backtracking.
//!
//! Linear contexts are threaded lazily: a subgoal receives everything still
//! available, reports back what it used, and the node checks exactness.
//! Rule choice at a prefix is driven by the prefix channel's region and type;
//! the remaining nondeterminism (cut variant and type, copyR vs copyL,
//! silent `!L`/`?R` moves, forwarder axiom choice) is resolved by ordered
//! backtracking. The search is sound unconditionally and complete relative
//! to the budget and the cut-type universe.

use std::collections::BTreeSet;

use crate::ast::{Context, Judgment, Name, Process, System, TypeExpr};
use crate::syntax::print_judgment;

use super::rules::{copy_shape, cut_shape, send_composite};
use super::{check_derivation, Config, Derivation, RuleName};

#[derive(Debug, Clone)]
pub struct InferenceBudget {
    pub max_depth: usize,
    pub max_backtracks: usize,
    /// candidate cut types for unannotated restrictions
    pub type_universe: Vec<TypeExpr>,
}

impl Default for InferenceBudget {
    fn default() -> Self {
        InferenceBudget {
            max_depth: 64,
            max_backtracks: 500_000,
            type_universe: Vec::new(),
        }
    }
}

impl InferenceBudget {
    pub fn with_universe(mut self, universe: Vec<TypeExpr>) -> Self {
        self.type_universe = universe;
        self
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum InferError {
    #[error("no derivation found{0}")]
    NotFound(String),
    #[error("restriction on {0} needs a type annotation (the cut-type universe is empty)")]
    AnnotationRequired(Name),
}

/// maximum alternative solutions kept per subgoal
const GOAL_CAP: usize = 64;

#[derive(Clone, Copy, PartialEq)]
enum Table {
    Ull,
    Ullm,
    IllStar,
}

impl Table {
    fn allows(&self, rule: RuleName) -> bool {
        match self {
            Table::Ull => rule.in_system(System::Ull),
            Table::Ullm | Table::IllStar => rule.is_star(),
        }
    }
}

struct Search {
    budget_left: i64,
    universe: Vec<TypeExpr>,
    table: Table,
    mix: bool,
    ill_mode: bool,
    cap: usize,
    deepest: Option<(usize, String)>,
    annotation_hint: Option<Name>,
}

impl Search {
    fn tick(&mut self) -> bool {
        self.budget_left -= 1;
        self.budget_left >= 0
    }

    fn note_failure(&mut self, depth_left: usize, j: String) {
        let better = match &self.deepest {
            None => true,
            Some((d, _)) => depth_left < *d,
        };
        if better {
            self.deepest = Some((depth_left, j));
        }
    }
}

#[derive(Clone)]
struct Sol {
    deriv: Derivation,
    dused: Context,
    lused: Context,
}

fn fresh_unrestricted(
    gamma: &Context,
    davail: &Context,
    lavail: &Context,
    process: &Process,
) -> Name {
    let mut avoid: BTreeSet<Name> = gamma.names().cloned().collect();
    avoid.extend(davail.names().cloned());
    avoid.extend(lavail.names().cloned());
    avoid.extend(process.free_names());
    avoid.extend(process.bound_names());
    crate::ast::fresh_name("u", &avoid)
}

/// Candidate cut types: the annotation (and its dual) if present, otherwise
/// the universe (each type and its dual).
fn cut_candidates(
    ann: Option<&TypeExpr>,
    search: &mut Search,
    channel: &Name,
) -> Vec<TypeExpr> {
    let mut out = Vec::new();
    let mut push = |t: TypeExpr, out: &mut Vec<TypeExpr>| {
        if !out.contains(&t) {
            out.push(t);
        }
    };
    match ann {
        Some(t) => {
            push(t.clone(), &mut out);
            push(t.dual(), &mut out);
        }
        None => {
            if search.universe.is_empty() {
                search.annotation_hint = Some(channel.clone());
            }
            for t in search.universe.clone() {
                push(t.clone(), &mut out);
                push(t.dual(), &mut out);
            }
        }
    }
    out
}

fn two_sided(gamma: &Context, dused: &Context, process: &Process, lused: &Context) -> Judgment {
    Judgment::Ull {
        gamma: gamma.clone(),
        delta: dused.clone(),
        process: process.clone(),
        lambda: lused.clone(),
    }
}

/// Enumerates derivations of `Γ; Δused ⊢ P :: Λused` with the used regions
/// drawn from the available ones.
#[allow(clippy::too_many_arguments)]
fn solve2(
    gamma: &Context,
    davail: &Context,
    lavail: &Context,
    process: &Process,
    depth: usize,
    moved: &BTreeSet<Name>,
    search: &mut Search,
) -> Vec<Sol> {
    let mut out: Vec<Sol> = Vec::new();
    if !search.tick() {
        return out;
    }
    if depth == 0 {
        search.note_failure(
            0,
            print_judgment(&two_sided(gamma, davail, process, lavail)),
        );
        return out;
    }
    let d = depth - 1;
    let fresh_moved = BTreeSet::new();

    let push =
        |sol: Sol, out: &mut Vec<Sol>, search: &mut Search| {
            if search.ill_mode && sol.lused.len() != 1 {
                return;
            }
            if out.len() < search.cap {
                out.push(sol);
            }
        };

    macro_rules! done {
        () => {
            if out.len() >= search.cap || search.budget_left < 0 {
                return out;
            }
        };
    }

    match process {
        Process::Forward(a, b) if a != b => {
            // idR, in both orientations
            for (l, r) in [(a, b), (b, a)] {
                if let (Some(tl), Some(tr)) = (davail.get(l), lavail.get(r)) {
                    if tl == tr {
                        let sol = Sol {
                            deriv: Derivation::leaf(
                                RuleName::IdR,
                                two_sided(
                                    gamma,
                                    &Context::singleton(l.clone(), tl.clone()),
                                    process,
                                    &Context::singleton(r.clone(), tr.clone()),
                                ),
                            ),
                            dused: Context::singleton(l.clone(), tl.clone()),
                            lused: Context::singleton(r.clone(), tr.clone()),
                        };
                        push(sol, &mut out, search);
                        done!();
                    }
                }
            }
            // idL
            if search.table.allows(RuleName::IdL) {
                if let (Some(ta), Some(tb)) = (davail.get(a), davail.get(b)) {
                    if *tb == ta.dual() {
                        let used = Context::from_pairs(vec![
                            (a.clone(), ta.clone()),
                            (b.clone(), tb.clone()),
                        ]);
                        let sol = Sol {
                            deriv: Derivation::leaf(
                                RuleName::IdL,
                                two_sided(gamma, &used, process, &Context::empty()),
                            ),
                            dused: used,
                            lused: Context::empty(),
                        };
                        push(sol, &mut out, search);
                        done!();
                    }
                }
            }
        }
        Process::CloseOut(x) => {
            if lavail.get(x) == Some(&TypeExpr::One) {
                let lused = Context::singleton(x.clone(), TypeExpr::One);
                let sol = Sol {
                    deriv: Derivation::leaf(
                        RuleName::OneR,
                        two_sided(gamma, &Context::empty(), process, &lused),
                    ),
                    dused: Context::empty(),
                    lused,
                };
                push(sol, &mut out, search);
                done!();
            }
            if search.table.allows(RuleName::BotL) && davail.get(x) == Some(&TypeExpr::Bot) {
                let dused = Context::singleton(x.clone(), TypeExpr::Bot);
                let sol = Sol {
                    deriv: Derivation::leaf(
                        RuleName::BotL,
                        two_sided(gamma, &dused, process, &Context::empty()),
                    ),
                    dused,
                    lused: Context::empty(),
                };
                push(sol, &mut out, search);
                done!();
            }
        }
        Process::WaitIn { channel: x, body } => {
            if davail.get(x) == Some(&TypeExpr::One) {
                let (davail2, _) = davail.remove(x).unwrap();
                for sub in solve2(gamma, &davail2, lavail, body, d, &fresh_moved, search) {
                    let dused = sub.dused.extended(x.clone(), TypeExpr::One);
                    let sol = Sol {
                        deriv: Derivation::node(
                            RuleName::OneL,
                            two_sided(gamma, &dused, process, &sub.lused),
                            vec![sub.deriv],
                        ),
                        dused,
                        lused: sub.lused,
                    };
                    push(sol, &mut out, search);
                }
                done!();
            }
            if search.table.allows(RuleName::BotR) && lavail.get(x) == Some(&TypeExpr::Bot) {
                let (lavail2, _) = lavail.remove(x).unwrap();
                for sub in solve2(gamma, davail, &lavail2, body, d, &fresh_moved, search) {
                    let lused = sub.lused.extended(x.clone(), TypeExpr::Bot);
                    let sol = Sol {
                        deriv: Derivation::node(
                            RuleName::BotR,
                            two_sided(gamma, &sub.dused, process, &lused),
                            vec![sub.deriv],
                        ),
                        dused: sub.dused,
                        lused,
                    };
                    push(sol, &mut out, search);
                }
                done!();
            }
        }
        Process::Input {
            channel: x,
            binder: y,
            body,
        } => {
            if let Some(TypeExpr::Tensor(a, b)) = davail.get(x) {
                let (a, b) = ((**a).clone(), (**b).clone());
                let (davail2, tx) = davail.remove(x).unwrap();
                let inner = davail2
                    .extended(y.clone(), a.clone())
                    .extended(x.clone(), b.clone());
                for sub in solve2(gamma, &inner, lavail, body, d, &fresh_moved, search) {
                    if sub.dused.get(y).is_none() || sub.dused.get(x).is_none() {
                        continue;
                    }
                    let dused = sub
                        .dused
                        .remove(y)
                        .unwrap()
                        .0
                        .remove(x)
                        .unwrap()
                        .0
                        .extended(x.clone(), tx.clone());
                    let sol = Sol {
                        deriv: Derivation::node(
                            RuleName::TensorL,
                            two_sided(gamma, &dused, process, &sub.lused),
                            vec![sub.deriv],
                        ),
                        dused,
                        lused: sub.lused,
                    };
                    push(sol, &mut out, search);
                }
                done!();
            }
            if let Some(TypeExpr::Lolli(ta, tb)) = lavail.get(x) {
                let (ta, tb) = ((**ta).clone(), (**tb).clone());
                let (lavail2, tx) = lavail.remove(x).unwrap();
                // lolliR: the payload is relied upon on the left
                {
                    let davail2 = davail.extended(y.clone(), ta.clone());
                    let inner = lavail2.extended(x.clone(), tb.clone());
                    for sub in solve2(gamma, &davail2, &inner, body, d, &fresh_moved, search) {
                        if sub.dused.get(y).is_none() || sub.lused.get(x).is_none() {
                            continue;
                        }
                        let dused = sub.dused.remove(y).unwrap().0;
                        let lused = sub
                            .lused
                            .remove(x)
                            .unwrap()
                            .0
                            .extended(x.clone(), tx.clone());
                        let sol = Sol {
                            deriv: Derivation::node(
                                RuleName::LolliR,
                                two_sided(gamma, &dused, process, &lused),
                                vec![sub.deriv],
                            ),
                            dused,
                            lused,
                        };
                        push(sol, &mut out, search);
                    }
                }
                done!();
                // parR: the payload is offered on the right (A ⅋ B reading)
                if search.table.allows(RuleName::ParR) {
                    let inner = lavail2
                        .extended(y.clone(), ta.dual())
                        .extended(x.clone(), tb.clone());
                    for sub in solve2(gamma, davail, &inner, body, d, &fresh_moved, search) {
                        if sub.lused.get(y).is_none() || sub.lused.get(x).is_none() {
                            continue;
                        }
                        let lused = sub
                            .lused
                            .remove(y)
                            .unwrap()
                            .0
                            .remove(x)
                            .unwrap()
                            .0
                            .extended(x.clone(), tx.clone());
                        let sol = Sol {
                            deriv: Derivation::node(
                                RuleName::ParR,
                                two_sided(gamma, &sub.dused, process, &lused),
                                vec![sub.deriv],
                            ),
                            dused: sub.dused,
                            lused,
                        };
                        push(sol, &mut out, search);
                    }
                    done!();
                }
            }
        }
        Process::Select {
            channel: x,
            label: j,
            body,
        } => {
            if let Some(TypeExpr::Plus(bs)) = lavail.get(x) {
                if let Some(aj) = bs.get(j) {
                    let aj = aj.clone();
                    let (lavail2, tx) = lavail.remove(x).unwrap();
                    let inner = lavail2.extended(x.clone(), aj);
                    for sub in solve2(gamma, davail, &inner, body, d, &fresh_moved, search) {
                        if sub.lused.get(x).is_none() {
                            continue;
                        }
                        let lused = sub
                            .lused
                            .remove(x)
                            .unwrap()
                            .0
                            .extended(x.clone(), tx.clone());
                        let sol = Sol {
                            deriv: Derivation::node(
                                RuleName::PlusR,
                                two_sided(gamma, &sub.dused, process, &lused),
                                vec![sub.deriv],
                            ),
                            dused: sub.dused,
                            lused,
                        };
                        push(sol, &mut out, search);
                    }
                    done!();
                }
            }
            if let Some(TypeExpr::With(bs)) = davail.get(x) {
                if let Some(aj) = bs.get(j) {
                    let aj = aj.clone();
                    let (davail2, tx) = davail.remove(x).unwrap();
                    let inner = davail2.extended(x.clone(), aj);
                    for sub in solve2(gamma, &inner, lavail, body, d, &fresh_moved, search) {
                        if sub.dused.get(x).is_none() {
                            continue;
                        }
                        let dused = sub
                            .dused
                            .remove(x)
                            .unwrap()
                            .0
                            .extended(x.clone(), tx.clone());
                        let sol = Sol {
                            deriv: Derivation::node(
                                RuleName::WithL,
                                two_sided(gamma, &dused, process, &sub.lused),
                                vec![sub.deriv],
                            ),
                            dused,
                            lused: sub.lused,
                        };
                        push(sol, &mut out, search);
                    }
                    done!();
                }
            }
        }
        Process::Branch { channel: x, arms } => {
            for (right, rule) in [(false, RuleName::PlusL), (true, RuleName::WithR)] {
                let avail = if right { lavail } else { davail };
                let bs = match avail.get(x) {
                    Some(TypeExpr::Plus(bs)) if !right => bs.clone(),
                    Some(TypeExpr::With(bs)) if right => bs.clone(),
                    _ => continue,
                };
                let labels_match = arms.len() == bs.len()
                    && arms.iter().all(|(l, _)| bs.get(l).is_some());
                if !labels_match {
                    continue;
                }
                let tx = avail.get(x).unwrap().clone();
                // solve the first arm freely, then pin the usage for the rest
                let (first_label, first_proc) = &arms[0];
                let a0 = bs.get(first_label).unwrap().clone();
                let (davail2, lavail2) = if right {
                    (davail.clone(), lavail.remove(x).unwrap().0)
                } else {
                    (davail.remove(x).unwrap().0, lavail.clone())
                };
                let first_avail_d = if right {
                    davail2.clone()
                } else {
                    davail2.extended(x.clone(), a0.clone())
                };
                let first_avail_l = if right {
                    lavail2.extended(x.clone(), a0.clone())
                } else {
                    lavail2.clone()
                };
                let firsts = solve2(
                    gamma,
                    &first_avail_d,
                    &first_avail_l,
                    first_proc,
                    d,
                    &fresh_moved,
                    search,
                );
                'first: for sub0 in firsts {
                    if right {
                        if sub0.lused.get(x).is_none() {
                            continue;
                        }
                    } else if sub0.dused.get(x).is_none() {
                        continue;
                    }
                    // shared regions of all premises
                    let (shared_d, shared_l) = if right {
                        (sub0.dused.clone(), sub0.lused.remove(x).unwrap().0)
                    } else {
                        (sub0.dused.remove(x).unwrap().0, sub0.lused.clone())
                    };
                    let mut premises = vec![sub0.deriv.clone()];
                    for (l, p) in arms.iter().skip(1) {
                        let ai = bs.get(l).unwrap().clone();
                        let (ad, al) = if right {
                            (shared_d.clone(), shared_l.extended(x.clone(), ai))
                        } else {
                            (shared_d.extended(x.clone(), ai), shared_l.clone())
                        };
                        // the remaining arms must use exactly the shared regions
                        let subs = solve2(gamma, &ad, &al, p, d, &fresh_moved, search);
                        let found = subs
                            .into_iter()
                            .find(|s| s.dused == ad && s.lused == al);
                        match found {
                            Some(s) => premises.push(s.deriv),
                            None => continue 'first,
                        }
                    }
                    let (dused, lused) = if right {
                        (shared_d.clone(), shared_l.extended(x.clone(), tx.clone()))
                    } else {
                        (shared_d.extended(x.clone(), tx.clone()), shared_l.clone())
                    };
                    let sol = Sol {
                        deriv: Derivation::node(
                            rule,
                            two_sided(gamma, &dused, process, &lused),
                            premises,
                        ),
                        dused,
                        lused,
                    };
                    push(sol, &mut out, search);
                }
                done!();
            }
        }
        Process::Server {
            channel: x,
            binder: y,
            body,
        } => {
            if let Some(TypeExpr::Bang(a)) = lavail.get(x) {
                let a = (**a).clone();
                let want = Context::singleton(y.clone(), a.clone());
                for sub in solve2(
                    gamma,
                    &Context::empty(),
                    &want,
                    body,
                    d,
                    &fresh_moved,
                    search,
                ) {
                    if !sub.dused.is_empty() || sub.lused != want {
                        continue;
                    }
                    let lused = Context::singleton(x.clone(), TypeExpr::bang(a.clone()));
                    let sol = Sol {
                        deriv: Derivation::node(
                            RuleName::BangR,
                            two_sided(gamma, &Context::empty(), process, &lused),
                            vec![sub.deriv],
                        ),
                        dused: Context::empty(),
                        lused,
                    };
                    push(sol, &mut out, search);
                }
                done!();
            }
            if search.table.allows(RuleName::QueryL) {
                if let Some(TypeExpr::Query(a)) = davail.get(x) {
                    let a = (**a).clone();
                    let want = Context::singleton(y.clone(), a.clone());
                    for sub in solve2(
                        gamma,
                        &want,
                        &Context::empty(),
                        body,
                        d,
                        &fresh_moved,
                        search,
                    ) {
                        if sub.dused != want || !sub.lused.is_empty() {
                            continue;
                        }
                        let dused = Context::singleton(x.clone(), TypeExpr::query(a.clone()));
                        let sol = Sol {
                            deriv: Derivation::node(
                                RuleName::QueryL,
                                two_sided(gamma, &dused, process, &Context::empty()),
                                vec![sub.deriv],
                            ),
                            dused,
                            lused: Context::empty(),
                        };
                        push(sol, &mut out, search);
                    }
                    done!();
                }
            }
        }
        Process::Par(_, _) if search.mix && search.table == Table::Ull => {
            let (pl, pr) = match process {
                Process::Par(a, b) => (&**a, &**b),
                _ => unreachable!(),
            };
            for s1 in solve2(gamma, davail, lavail, pl, d, &fresh_moved, search) {
                let d2 = davail.subtract(&s1.dused).unwrap();
                let l2 = lavail.subtract(&s1.lused).unwrap();
                for s2 in solve2(gamma, &d2, &l2, pr, d, &fresh_moved, search) {
                    let dused = s1.dused.union(&s2.dused);
                    let lused = s1.lused.union(&s2.lused);
                    let sol = Sol {
                        deriv: Derivation::node(
                            RuleName::Mix,
                            two_sided(gamma, &dused, process, &lused),
                            vec![s1.deriv.clone(), s2.deriv],
                        ),
                        dused,
                        lused,
                    };
                    push(sol, &mut out, search);
                }
            }
            done!();
        }
        Process::Inact if search.mix && search.table == Table::Ull => {
            let sol = Sol {
                deriv: Derivation::leaf(
                    RuleName::Empty,
                    two_sided(gamma, &Context::empty(), process, &Context::empty()),
                ),
                dused: Context::empty(),
                lused: Context::empty(),
            };
            push(sol, &mut out, search);
            done!();
        }
        Process::Restrict { .. } => {
            if let Some((x, y, pl, pr)) = send_composite(process) {
                let (x, y) = (x.clone(), y.clone());
                let (pl, pr) = (pl.clone(), pr.clone());
                solve2_send(
                    gamma, davail, lavail, process, &x, &y, &pl, &pr, d, search, &mut out,
                );
                done!();
            }
            if let Some((u, xx, body)) = copy_shape(process) {
                let (u, xx) = (u.clone(), xx.clone());
                let body = body.clone();
                if let Some(a) = gamma.get(&u).cloned() {
                    // copyL
                    {
                        let inner = davail.extended(xx.clone(), a.clone());
                        for sub in solve2(gamma, &inner, lavail, &body, d, &fresh_moved, search)
                        {
                            if sub.dused.get(&xx).is_none() {
                                continue;
                            }
                            let dused = sub.dused.remove(&xx).unwrap().0;
                            let sol = Sol {
                                deriv: Derivation::node(
                                    RuleName::CopyL,
                                    two_sided(gamma, &dused, process, &sub.lused),
                                    vec![sub.deriv],
                                ),
                                dused,
                                lused: sub.lused,
                            };
                            push(sol, &mut out, search);
                        }
                        done!();
                    }
                    // copyR
                    if search.table.allows(RuleName::CopyR) {
                        let inner = lavail.extended(xx.clone(), a.dual());
                        for sub in solve2(gamma, davail, &inner, &body, d, &fresh_moved, search)
                        {
                            if sub.lused.get(&xx).is_none() {
                                continue;
                            }
                            let lused = sub.lused.remove(&xx).unwrap().0;
                            let sol = Sol {
                                deriv: Derivation::node(
                                    RuleName::CopyR,
                                    two_sided(gamma, &sub.dused, process, &lused),
                                    vec![sub.deriv],
                                ),
                                dused: sub.dused,
                                lused,
                            };
                            push(sol, &mut out, search);
                        }
                        done!();
                    }
                }
            }
            if let Some((x, ann, pl, pr)) = cut_shape(process) {
                let x = x.clone();
                let ann = ann.cloned();
                let (pl, pr) = (pl.clone(), pr.clone());
                solve2_cut(
                    gamma,
                    davail,
                    lavail,
                    process,
                    &x,
                    ann.as_ref(),
                    &pl,
                    &pr,
                    d,
                    search,
                    &mut out,
                );
                done!();
            }
        }
        _ => {}
    }

    // silent rules, tried after the structural candidates
    if search.table.allows(RuleName::BangL) {
        let bangs: Vec<(Name, TypeExpr)> = davail
            .iter()
            .filter_map(|(z, t)| match t {
                TypeExpr::Bang(a) => Some((z.clone(), (**a).clone())),
                _ => None,
            })
            .collect();
        for (z, a) in bangs {
            done!();
            let u = fresh_unrestricted(gamma, davail, lavail, process);
            let gamma2 = gamma.extended(u.clone(), a.clone());
            let (davail2, tz) = davail.remove(&z).unwrap();
            let inner_proc = process.substitute(&u, &z);
            for sub in solve2(&gamma2, &davail2, lavail, &inner_proc, d, &fresh_moved, search) {
                let dused = sub.dused.extended(z.clone(), tz.clone());
                let sol = Sol {
                    deriv: Derivation::node(
                        RuleName::BangL,
                        two_sided(gamma, &dused, process, &sub.lused),
                        vec![sub.deriv],
                    ),
                    dused,
                    lused: sub.lused,
                };
                push(sol, &mut out, search);
            }
        }
    }
    if search.table.allows(RuleName::QueryR) {
        let queries: Vec<(Name, TypeExpr)> = lavail
            .iter()
            .filter_map(|(z, t)| match t {
                TypeExpr::Query(dd) => Some((z.clone(), (**dd).clone())),
                _ => None,
            })
            .collect();
        for (z, dd) in queries {
            done!();
            let u = fresh_unrestricted(gamma, davail, lavail, process);
            let gamma2 = gamma.extended(u.clone(), dd.dual());
            let (lavail2, tz) = lavail.remove(&z).unwrap();
            let inner_proc = process.substitute(&u, &z);
            for sub in solve2(&gamma2, davail, &lavail2, &inner_proc, d, &fresh_moved, search) {
                let lused = sub.lused.extended(z.clone(), tz.clone());
                let sol = Sol {
                    deriv: Derivation::node(
                        RuleName::QueryR,
                        two_sided(gamma, &sub.dused, process, &lused),
                        vec![sub.deriv],
                    ),
                    dused: sub.dused,
                    lused,
                };
                push(sol, &mut out, search);
            }
        }
    }

    // one ↶/↷ move on a channel relevant to the head action (ULLM only)
    if search.table == Table::Ullm {
        for z in relevant_channels(process) {
            done!();
            if moved.contains(&z) {
                continue;
            }
            let mut moved2 = moved.clone();
            moved2.insert(z.clone());
            if let Some((davail2, t)) = davail.remove(&z) {
                // conclusion came from moveL: premise has z:¬t on the right
                let inner = lavail.extended(z.clone(), t.dual());
                for sub in solve2(gamma, &davail2, &inner, process, d, &moved2, search) {
                    if sub.lused.get(&z).is_none() {
                        continue;
                    }
                    let lused = sub.lused.remove(&z).unwrap().0;
                    let dused = sub.dused.extended(z.clone(), t.clone());
                    let sol = Sol {
                        deriv: Derivation::node(
                            RuleName::MoveL,
                            two_sided(gamma, &dused, process, &lused),
                            vec![sub.deriv],
                        ),
                        dused,
                        lused,
                    };
                    push(sol, &mut out, search);
                }
            }
            if let Some((lavail2, t)) = lavail.remove(&z) {
                // conclusion came from moveR: premise has z:¬t on the left
                let inner = davail.extended(z.clone(), t.dual());
                for sub in solve2(gamma, &inner, &lavail2, process, d, &moved2, search) {
                    if sub.dused.get(&z).is_none() {
                        continue;
                    }
                    let dused = sub.dused.remove(&z).unwrap().0;
                    let lused = sub.lused.extended(z.clone(), t.clone());
                    let sol = Sol {
                        deriv: Derivation::node(
                            RuleName::MoveR,
                            two_sided(gamma, &dused, process, &lused),
                            vec![sub.deriv],
                        ),
                        dused,
                        lused,
                    };
                    push(sol, &mut out, search);
                }
            }
        }
    }

    if out.is_empty() {
        search.note_failure(
            depth,
            print_judgment(&two_sided(gamma, davail, process, lavail)),
        );
    }
    out
}

/// channels whose placement can drive a rule for the head of `p`
fn relevant_channels(p: &Process) -> Vec<Name> {
    match p {
        Process::Forward(a, b) => vec![a.clone(), b.clone()],
        Process::CloseOut(x)
        | Process::WaitIn { channel: x, .. }
        | Process::Input { channel: x, .. }
        | Process::Select { channel: x, .. }
        | Process::Branch { channel: x, .. }
        | Process::Server { channel: x, .. } => vec![x.clone()],
        Process::Restrict { .. } => match copy_shape(p) {
            Some((u, _, _)) => vec![u.clone()],
            None => Vec::new(),
        },
        _ => Vec::new(),
    }
}

#[allow(clippy::too_many_arguments)]
fn solve2_send(
    gamma: &Context,
    davail: &Context,
    lavail: &Context,
    process: &Process,
    x: &Name,
    y: &Name,
    pl: &Process,
    pr: &Process,
    d: usize,
    search: &mut Search,
    out: &mut Vec<Sol>,
) {
    let fresh_moved = BTreeSet::new();
    let push = |sol: Sol, out: &mut Vec<Sol>, search: &mut Search| {
        if search.ill_mode && sol.lused.len() != 1 {
            return;
        }
        if out.len() < search.cap {
            out.push(sol);
        }
    };
    // tensorR
    if let Some(TypeExpr::Tensor(a, b)) = lavail.get(x) {
        let (a, b) = ((**a).clone(), (**b).clone());
        let (lavail2, tx) = lavail.remove(x).unwrap();
        let avail1 = lavail2.extended(y.clone(), a.clone());
        for s1 in solve2(gamma, davail, &avail1, pl, d, &fresh_moved, search) {
            if s1.lused.get(y).is_none() {
                continue;
            }
            let l1 = s1.lused.remove(y).unwrap().0;
            let d2 = davail.subtract(&s1.dused).unwrap();
            let l2avail = lavail2.subtract(&l1).unwrap().extended(x.clone(), b.clone());
            for s2 in solve2(gamma, &d2, &l2avail, pr, d, &fresh_moved, search) {
                if s2.lused.get(x).is_none() {
                    continue;
                }
                let l2 = s2.lused.remove(x).unwrap().0;
                let dused = s1.dused.union(&s2.dused);
                let lused = l1.union(&l2).extended(x.clone(), tx.clone());
                let sol = Sol {
                    deriv: Derivation::node(
                        RuleName::TensorR,
                        two_sided(gamma, &dused, process, &lused),
                        vec![s1.deriv.clone(), s2.deriv],
                    ),
                    dused,
                    lused,
                };
                push(sol, out, search);
                if out.len() >= search.cap {
                    return;
                }
            }
        }
    }
    if let Some(TypeExpr::Lolli(ta, tb)) = davail.get(x) {
        let (ta, tb) = ((**ta).clone(), (**tb).clone());
        let (davail2, tx) = davail.remove(x).unwrap();
        // lolliL: payload offered on the right by the first component
        {
            let avail1l = lavail.extended(y.clone(), ta.clone());
            for s1 in solve2(gamma, &davail2, &avail1l, pl, d, &fresh_moved, search) {
                if s1.lused.get(y).is_none() {
                    continue;
                }
                let l1 = s1.lused.remove(y).unwrap().0;
                let d2avail = davail2
                    .subtract(&s1.dused)
                    .unwrap()
                    .extended(x.clone(), tb.clone());
                let l2avail = lavail.subtract(&l1).unwrap();
                for s2 in solve2(gamma, &d2avail, &l2avail, pr, d, &fresh_moved, search) {
                    if s2.dused.get(x).is_none() {
                        continue;
                    }
                    let d2 = s2.dused.remove(x).unwrap().0;
                    let dused = s1.dused.union(&d2).extended(x.clone(), tx.clone());
                    let lused = l1.union(&s2.lused);
                    let sol = Sol {
                        deriv: Derivation::node(
                            RuleName::LolliL,
                            two_sided(gamma, &dused, process, &lused),
                            vec![s1.deriv.clone(), s2.deriv],
                        ),
                        dused,
                        lused,
                    };
                    push(sol, out, search);
                    if out.len() >= search.cap {
                        return;
                    }
                }
            }
        }
        // parL: payload relied upon on the left (A ⅋ B reading)
        if search.table.allows(RuleName::ParL) {
            let avail1 = davail2.extended(y.clone(), ta.dual());
            for s1 in solve2(gamma, &avail1, lavail, pl, d, &fresh_moved, search) {
                if s1.dused.get(y).is_none() {
                    continue;
                }
                let d1 = s1.dused.remove(y).unwrap().0;
                let d2avail = davail2
                    .subtract(&d1)
                    .unwrap()
                    .extended(x.clone(), tb.clone());
                let l2avail = lavail.subtract(&s1.lused).unwrap();
                for s2 in solve2(gamma, &d2avail, &l2avail, pr, d, &fresh_moved, search) {
                    if s2.dused.get(x).is_none() {
                        continue;
                    }
                    let d2 = s2.dused.remove(x).unwrap().0;
                    let dused = d1.union(&d2).extended(x.clone(), tx.clone());
                    let lused = s1.lused.union(&s2.lused);
                    let sol = Sol {
                        deriv: Derivation::node(
                            RuleName::ParL,
                            two_sided(gamma, &dused, process, &lused),
                            vec![s1.deriv.clone(), s2.deriv],
                        ),
                        dused,
                        lused,
                    };
                    push(sol, out, search);
                    if out.len() >= search.cap {
                        return;
                    }
                }
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn solve2_cut(
    gamma: &Context,
    davail: &Context,
    lavail: &Context,
    process: &Process,
    x: &Name,
    ann: Option<&TypeExpr>,
    pl: &Process,
    pr: &Process,
    d: usize,
    search: &mut Search,
    out: &mut Vec<Sol>,
) {
    let fresh_moved = BTreeSet::new();
    let push = |sol: Sol, out: &mut Vec<Sol>, search: &mut Search| {
        if search.ill_mode && sol.lused.len() != 1 {
            return;
        }
        if out.len() < search.cap {
            out.push(sol);
        }
    };
    let candidates = cut_candidates(ann, search, x);

    // linear cuts
    for a in &candidates {
        if out.len() >= search.cap || search.budget_left < 0 {
            return;
        }
        let variants: &[(RuleName, bool, bool)] = &[
            (RuleName::CutRL, true, false),
            (RuleName::CutLR, false, true),
            (RuleName::CutRR, true, true),
            (RuleName::CutLL, false, false),
        ];
        for (rule, p1_right, p2_right) in variants {
            if !search.table.allows(*rule) {
                continue;
            }
            // for the same-type cuts the second premise carries `a`; for the
            // dual cuts it carries `¬a`
            let a2 = match rule {
                RuleName::CutRL | RuleName::CutLR => a.clone(),
                _ => a.dual(),
            };
            let (avail1d, avail1l) = if *p1_right {
                (davail.clone(), lavail.extended(x.clone(), a.clone()))
            } else {
                (davail.extended(x.clone(), a.clone()), lavail.clone())
            };
            for s1 in solve2(gamma, &avail1d, &avail1l, pl, d, &fresh_moved, search) {
                let (d1, l1) = if *p1_right {
                    if s1.lused.get(x).is_none() {
                        continue;
                    }
                    (s1.dused.clone(), s1.lused.remove(x).unwrap().0)
                } else {
                    if s1.dused.get(x).is_none() {
                        continue;
                    }
                    (s1.dused.remove(x).unwrap().0, s1.lused.clone())
                };
                let d2base = davail.subtract(&d1).unwrap();
                let l2base = lavail.subtract(&l1).unwrap();
                let (avail2d, avail2l) = if *p2_right {
                    (d2base.clone(), l2base.extended(x.clone(), a2.clone()))
                } else {
                    (d2base.extended(x.clone(), a2.clone()), l2base.clone())
                };
                for s2 in solve2(gamma, &avail2d, &avail2l, pr, d, &fresh_moved, search) {
                    let (d2, l2) = if *p2_right {
                        if s2.lused.get(x).is_none() {
                            continue;
                        }
                        (s2.dused.clone(), s2.lused.remove(x).unwrap().0)
                    } else {
                        if s2.dused.get(x).is_none() {
                            continue;
                        }
                        (s2.dused.remove(x).unwrap().0, s2.lused.clone())
                    };
                    let dused = d1.union(&d2);
                    let lused = l1.union(&l2);
                    let sol = Sol {
                        deriv: Derivation::node(
                            *rule,
                            two_sided(gamma, &dused, process, &lused),
                            vec![s1.deriv.clone(), s2.deriv],
                        ),
                        dused,
                        lused,
                    };
                    push(sol, out, search);
                    if out.len() >= search.cap {
                        return;
                    }
                }
            }
        }
    }

    // unrestricted cuts: one component replicates on the cut channel
    for (server_left, client, server) in [(false, pl, pr), (true, pr, pl)] {
        let (z, sbody) = match server {
            Process::Server {
                channel,
                binder,
                body,
            } if channel == x => (binder.clone(), (**body).clone()),
            _ => continue,
        };
        for a in &candidates {
            if out.len() >= search.cap || search.budget_left < 0 {
                return;
            }
            let bang_rule = if server_left {
                RuleName::CutBangL
            } else {
                RuleName::CutBangR
            };
            let query_rule = if server_left {
                RuleName::CutQueryL
            } else {
                RuleName::CutQueryR
            };
            let gamma2 = if gamma.get(x).is_none() {
                gamma.extended(x.clone(), a.clone())
            } else {
                continue;
            };
            let clients = solve2(&gamma2, davail, lavail, client, d, &fresh_moved, search);
            if clients.is_empty() {
                continue;
            }
            // cut!: server offers z:A with nothing else
            if search.table.allows(bang_rule) {
                let want = Context::singleton(z.clone(), a.clone());
                let servers: Vec<Sol> = solve2(
                    gamma,
                    &Context::empty(),
                    &want,
                    &sbody,
                    d,
                    &fresh_moved,
                    search,
                )
                .into_iter()
                .filter(|s| s.dused.is_empty() && s.lused == want)
                .collect();
                for s2 in &servers {
                    for s1 in &clients {
                        let (first, second) = if server_left {
                            (s2.deriv.clone(), s1.deriv.clone())
                        } else {
                            (s1.deriv.clone(), s2.deriv.clone())
                        };
                        let sol = Sol {
                            deriv: Derivation::node(
                                bang_rule,
                                two_sided(gamma, &s1.dused, process, &s1.lused),
                                vec![first, second],
                            ),
                            dused: s1.dused.clone(),
                            lused: s1.lused.clone(),
                        };
                        push(sol, out, search);
                        if out.len() >= search.cap {
                            return;
                        }
                    }
                }
            }
            // cut?: server relies on z:¬A with nothing else
            if search.table.allows(query_rule) {
                let want = Context::singleton(z.clone(), a.dual());
                let servers: Vec<Sol> = solve2(
                    gamma,
                    &want,
                    &Context::empty(),
                    &sbody,
                    d,
                    &fresh_moved,
                    search,
                )
                .into_iter()
                .filter(|s| s.lused.is_empty() && s.dused == want)
                .collect();
                for s2 in &servers {
                    for s1 in &clients {
                        let (first, second) = if server_left {
                            (s2.deriv.clone(), s1.deriv.clone())
                        } else {
                            (s1.deriv.clone(), s2.deriv.clone())
                        };
                        let sol = Sol {
                            deriv: Derivation::node(
                                query_rule,
                                two_sided(gamma, &s1.dused, process, &s1.lused),
                                vec![first, second],
                            ),
                            dused: s1.dused.clone(),
                            lused: s1.lused.clone(),
                        };
                        push(sol, out, search);
                        if out.len() >= search.cap {
                            return;
                        }
                    }
                }
            }
        }
    }
}

// ---------- one-sided solver (CLL) ----------

#[derive(Clone)]
struct Sol1 {
    deriv: Derivation,
    dused: Context,
}

fn one_sided(gamma: &Context, process: &Process, dused: &Context) -> Judgment {
    Judgment::Cll {
        process: process.clone(),
        gamma: gamma.clone(),
        delta: dused.clone(),
    }
}

fn solve1(
    gamma: &Context,
    davail: &Context,
    process: &Process,
    depth: usize,
    search: &mut Search,
) -> Vec<Sol1> {
    let mut out: Vec<Sol1> = Vec::new();
    if !search.tick() {
        return out;
    }
    if depth == 0 {
        search.note_failure(0, print_judgment(&one_sided(gamma, process, davail)));
        return out;
    }
    let d = depth - 1;
    let push = |sol: Sol1, out: &mut Vec<Sol1>, search: &mut Search| {
        if out.len() < search.cap {
            out.push(sol);
        }
    };
    macro_rules! done {
        () => {
            if out.len() >= search.cap || search.budget_left < 0 {
                return out;
            }
        };
    }

    match process {
        Process::Forward(a, b) if a != b => {
            if let (Some(ta), Some(tb)) = (davail.get(a), davail.get(b)) {
                if *tb == ta.dual() {
                    let used = Context::from_pairs(vec![
                        (a.clone(), ta.clone()),
                        (b.clone(), tb.clone()),
                    ]);
                    let sol = Sol1 {
                        deriv: Derivation::leaf(RuleName::Id, one_sided(gamma, process, &used)),
                        dused: used,
                    };
                    push(sol, &mut out, search);
                    done!();
                }
            }
        }
        Process::CloseOut(x) => {
            if davail.get(x) == Some(&TypeExpr::One) {
                let used = Context::singleton(x.clone(), TypeExpr::One);
                let sol = Sol1 {
                    deriv: Derivation::leaf(RuleName::CllOne, one_sided(gamma, process, &used)),
                    dused: used,
                };
                push(sol, &mut out, search);
                done!();
            }
        }
        Process::WaitIn { channel: x, body } => {
            if davail.get(x) == Some(&TypeExpr::Bot) {
                let (davail2, _) = davail.remove(x).unwrap();
                for sub in solve1(gamma, &davail2, body, d, search) {
                    let dused = sub.dused.extended(x.clone(), TypeExpr::Bot);
                    let sol = Sol1 {
                        deriv: Derivation::node(
                            RuleName::CllBot,
                            one_sided(gamma, process, &dused),
                            vec![sub.deriv],
                        ),
                        dused,
                    };
                    push(sol, &mut out, search);
                }
                done!();
            }
        }
        Process::Input {
            channel: x,
            binder: y,
            body,
        } => {
            if let Some(TypeExpr::Lolli(cc, b)) = davail.get(x) {
                let (a, b) = (cc.dual(), (**b).clone());
                let (davail2, tx) = davail.remove(x).unwrap();
                let inner = davail2
                    .extended(y.clone(), a)
                    .extended(x.clone(), b);
                for sub in solve1(gamma, &inner, body, d, search) {
                    if sub.dused.get(y).is_none() || sub.dused.get(x).is_none() {
                        continue;
                    }
                    let dused = sub
                        .dused
                        .remove(y)
                        .unwrap()
                        .0
                        .remove(x)
                        .unwrap()
                        .0
                        .extended(x.clone(), tx.clone());
                    let sol = Sol1 {
                        deriv: Derivation::node(
                            RuleName::CllPar,
                            one_sided(gamma, process, &dused),
                            vec![sub.deriv],
                        ),
                        dused,
                    };
                    push(sol, &mut out, search);
                }
                done!();
            }
        }
        Process::Select {
            channel: x,
            label: j,
            body,
        } => {
            if let Some(TypeExpr::Plus(bs)) = davail.get(x) {
                if let Some(aj) = bs.get(j) {
                    let aj = aj.clone();
                    let (davail2, tx) = davail.remove(x).unwrap();
                    let inner = davail2.extended(x.clone(), aj);
                    for sub in solve1(gamma, &inner, body, d, search) {
                        if sub.dused.get(x).is_none() {
                            continue;
                        }
                        let dused = sub
                            .dused
                            .remove(x)
                            .unwrap()
                            .0
                            .extended(x.clone(), tx.clone());
                        let sol = Sol1 {
                            deriv: Derivation::node(
                                RuleName::CllPlus,
                                one_sided(gamma, process, &dused),
                                vec![sub.deriv],
                            ),
                            dused,
                        };
                        push(sol, &mut out, search);
                    }
                    done!();
                }
            }
        }
        Process::Branch { channel: x, arms } => {
            if let Some(TypeExpr::With(bs)) = davail.get(x) {
                let bs = bs.clone();
                let labels_match =
                    arms.len() == bs.len() && arms.iter().all(|(l, _)| bs.get(l).is_some());
                if labels_match {
                    let tx = davail.get(x).unwrap().clone();
                    let (davail2, _) = davail.remove(x).unwrap();
                    let (first_label, first_proc) = &arms[0];
                    let a0 = bs.get(first_label).unwrap().clone();
                    let firsts = solve1(
                        gamma,
                        &davail2.extended(x.clone(), a0),
                        first_proc,
                        d,
                        search,
                    );
                    'first: for sub0 in firsts {
                        if sub0.dused.get(x).is_none() {
                            continue;
                        }
                        let shared = sub0.dused.remove(x).unwrap().0;
                        let mut premises = vec![sub0.deriv.clone()];
                        for (l, p) in arms.iter().skip(1) {
                            let ai = bs.get(l).unwrap().clone();
                            let avail = shared.extended(x.clone(), ai);
                            let subs = solve1(gamma, &avail, p, d, search);
                            match subs.into_iter().find(|s| s.dused == avail) {
                                Some(s) => premises.push(s.deriv),
                                None => continue 'first,
                            }
                        }
                        let dused = shared.extended(x.clone(), tx.clone());
                        let sol = Sol1 {
                            deriv: Derivation::node(
                                RuleName::CllWith,
                                one_sided(gamma, process, &dused),
                                premises,
                            ),
                            dused,
                        };
                        push(sol, &mut out, search);
                    }
                    done!();
                }
            }
        }
        Process::Server {
            channel: x,
            binder: y,
            body,
        } => {
            if let Some(TypeExpr::Bang(a)) = davail.get(x) {
                let a = (**a).clone();
                let want = Context::singleton(y.clone(), a.clone());
                for sub in solve1(gamma, &want, body, d, search) {
                    if sub.dused != want {
                        continue;
                    }
                    let dused = Context::singleton(x.clone(), TypeExpr::bang(a.clone()));
                    let sol = Sol1 {
                        deriv: Derivation::node(
                            RuleName::CllBang,
                            one_sided(gamma, process, &dused),
                            vec![sub.deriv],
                        ),
                        dused,
                    };
                    push(sol, &mut out, search);
                }
                done!();
            }
        }
        Process::Par(pl, pr) if search.mix => {
            for s1 in solve1(gamma, davail, pl, d, search) {
                let d2 = davail.subtract(&s1.dused).unwrap();
                for s2 in solve1(gamma, &d2, pr, d, search) {
                    let dused = s1.dused.union(&s2.dused);
                    let sol = Sol1 {
                        deriv: Derivation::node(
                            RuleName::Mix,
                            one_sided(gamma, process, &dused),
                            vec![s1.deriv.clone(), s2.deriv],
                        ),
                        dused,
                    };
                    push(sol, &mut out, search);
                }
            }
            done!();
        }
        Process::Inact if search.mix => {
            let sol = Sol1 {
                deriv: Derivation::leaf(
                    RuleName::Empty,
                    one_sided(gamma, process, &Context::empty()),
                ),
                dused: Context::empty(),
            };
            push(sol, &mut out, search);
            done!();
        }
        Process::Restrict { .. } => {
            if let Some((x, y, pl, pr)) = send_composite(process) {
                if let Some(TypeExpr::Tensor(a, b)) = davail.get(x) {
                    let (a, b) = ((**a).clone(), (**b).clone());
                    let (x, y) = (x.clone(), y.clone());
                    let (pl, pr) = (pl.clone(), pr.clone());
                    let (davail2, tx) = davail.remove(&x).unwrap();
                    let avail1 = davail2.extended(y.clone(), a);
                    for s1 in solve1(gamma, &avail1, &pl, d, search) {
                        if s1.dused.get(&y).is_none() {
                            continue;
                        }
                        let d1 = s1.dused.remove(&y).unwrap().0;
                        let avail2 = davail2
                            .subtract(&d1)
                            .unwrap()
                            .extended(x.clone(), b.clone());
                        for s2 in solve1(gamma, &avail2, &pr, d, search) {
                            if s2.dused.get(&x).is_none() {
                                continue;
                            }
                            let d2 = s2.dused.remove(&x).unwrap().0;
                            let dused = d1.union(&d2).extended(x.clone(), tx.clone());
                            let sol = Sol1 {
                                deriv: Derivation::node(
                                    RuleName::CllTensor,
                                    one_sided(gamma, process, &dused),
                                    vec![s1.deriv.clone(), s2.deriv],
                                ),
                                dused,
                            };
                            push(sol, &mut out, search);
                            if out.len() >= search.cap {
                                return out;
                            }
                        }
                    }
                    done!();
                }
            }
            if let Some((u, y, body)) = copy_shape(process) {
                if let Some(a) = gamma.get(u).cloned() {
                    let (u, y) = (u.clone(), y.clone());
                    let _ = u;
                    let body = body.clone();
                    let inner = davail.extended(y.clone(), a);
                    for sub in solve1(gamma, &inner, &body, d, search) {
                        if sub.dused.get(&y).is_none() {
                            continue;
                        }
                        let dused = sub.dused.remove(&y).unwrap().0;
                        let sol = Sol1 {
                            deriv: Derivation::node(
                                RuleName::Copy,
                                one_sided(gamma, process, &dused),
                                vec![sub.deriv],
                            ),
                            dused,
                        };
                        push(sol, &mut out, search);
                    }
                    done!();
                }
            }
            if let Some((x, ann, pl, pr)) = cut_shape(process) {
                let x = x.clone();
                let ann = ann.cloned();
                let (pl, pr) = (pl.clone(), pr.clone());
                let candidates = cut_candidates(ann.as_ref(), search, &x);
                // linear cut
                for a in &candidates {
                    done!();
                    let avail1 = davail.extended(x.clone(), a.clone());
                    for s1 in solve1(gamma, &avail1, &pl, d, search) {
                        if s1.dused.get(&x).is_none() {
                            continue;
                        }
                        let d1 = s1.dused.remove(&x).unwrap().0;
                        let avail2 = davail
                            .subtract(&d1)
                            .unwrap()
                            .extended(x.clone(), a.dual());
                        for s2 in solve1(gamma, &avail2, &pr, d, search) {
                            if s2.dused.get(&x).is_none() {
                                continue;
                            }
                            let d2 = s2.dused.remove(&x).unwrap().0;
                            let dused = d1.union(&d2);
                            let sol = Sol1 {
                                deriv: Derivation::node(
                                    RuleName::CllCut,
                                    one_sided(gamma, process, &dused),
                                    vec![s1.deriv.clone(), s2.deriv],
                                ),
                                dused,
                            };
                            push(sol, &mut out, search);
                            if out.len() >= search.cap {
                                return out;
                            }
                        }
                    }
                }
                // unrestricted cuts
                for (server_left, client, server) in [(false, &pl, &pr), (true, &pr, &pl)] {
                    let (z, sbody) = match server {
                        Process::Server {
                            channel,
                            binder,
                            body,
                        } if *channel == x => (binder.clone(), (**body).clone()),
                        _ => continue,
                    };
                    for a in &candidates {
                        done!();
                        if gamma.get(&x).is_some() {
                            continue;
                        }
                        let gamma2 = gamma.extended(x.clone(), a.clone());
                        let clients = solve1(&gamma2, davail, client, d, search);
                        if clients.is_empty() {
                            continue;
                        }
                        let want = Context::singleton(z.clone(), a.dual());
                        let servers: Vec<Sol1> = solve1(gamma, &want, &sbody, d, search)
                            .into_iter()
                            .filter(|s| s.dused == want)
                            .collect();
                        let rule = if server_left {
                            RuleName::CutQueryL
                        } else {
                            RuleName::CutQueryR
                        };
                        for s2 in &servers {
                            for s1 in &clients {
                                let (first, second) = if server_left {
                                    (s2.deriv.clone(), s1.deriv.clone())
                                } else {
                                    (s1.deriv.clone(), s2.deriv.clone())
                                };
                                let sol = Sol1 {
                                    deriv: Derivation::node(
                                        rule,
                                        one_sided(gamma, process, &s1.dused),
                                        vec![first, second],
                                    ),
                                    dused: s1.dused.clone(),
                                };
                                push(sol, &mut out, search);
                                if out.len() >= search.cap {
                                    return out;
                                }
                            }
                        }
                    }
                }
            }
        }
        _ => {}
    }

    // silent query rule
    let queries: Vec<(Name, TypeExpr)> = davail
        .iter()
        .filter_map(|(z, t)| match t {
            TypeExpr::Query(a) => Some((z.clone(), (**a).clone())),
            _ => None,
        })
        .collect();
    for (z, a) in queries {
        done!();
        let u = fresh_unrestricted(gamma, davail, &Context::empty(), process);
        let gamma2 = gamma.extended(u.clone(), a);
        let (davail2, tz) = davail.remove(&z).unwrap();
        let inner_proc = process.substitute(&u, &z);
        for sub in solve1(&gamma2, &davail2, &inner_proc, d, search) {
            let dused = sub.dused.extended(z.clone(), tz.clone());
            let sol = Sol1 {
                deriv: Derivation::node(
                    RuleName::CllQuery,
                    one_sided(gamma, process, &dused),
                    vec![sub.deriv],
                ),
                dused,
            };
            push(sol, &mut out, search);
        }
    }

    if out.is_empty() {
        search.note_failure(depth, print_judgment(&one_sided(gamma, process, davail)));
    }
    out
}

// ---------- public API ----------

fn ull_to_ill_derivation(d: &Derivation) -> Derivation {
    let rule = match d.rule {
        RuleName::IdR => RuleName::Id,
        RuleName::CopyL => RuleName::Copy,
        other => other,
    };
    let conclusion = match &d.conclusion {
        Judgment::Ull {
            gamma,
            delta,
            process,
            lambda,
        } => {
            let (right_name, right_type) = lambda.iter().next().expect("singleton right").clone();
            Judgment::Ill {
                gamma: gamma.clone(),
                delta: delta.clone(),
                process: process.clone(),
                right_name,
                right_type,
            }
        }
        other => other.clone(),
    };
    Derivation {
        rule,
        conclusion,
        premises: d.premises.iter().map(ull_to_ill_derivation).collect(),
    }
}

fn search_for(config: &Config, budget: &InferenceBudget) -> Search {
    let table = match config.system {
        System::Ull => Table::Ull,
        System::Ullm => Table::Ullm,
        System::Ill => Table::IllStar,
        System::Cll => Table::Ull, // unused by solve1
    };
    Search {
        budget_left: budget.max_backtracks as i64,
        universe: budget.type_universe.clone(),
        table,
        mix: config.mix,
        ill_mode: config.system == System::Ill,
        cap: GOAL_CAP,
        deepest: None,
        annotation_hint: None,
    }
}

/// All derivations of exactly the judgment `j`, up to the internal caps.
pub fn solve_goals(
    j: &Judgment,
    config: &Config,
    budget: &InferenceBudget,
    cap: usize,
) -> Vec<Derivation> {
    let mut search = search_for(config, budget);
    search.cap = cap.max(1).min(GOAL_CAP * 4);
    match (config.system, j) {
        (System::Ull | System::Ullm, Judgment::Ull { gamma, delta, process, lambda }) => {
            let moved = BTreeSet::new();
            let sols = solve2(gamma, delta, lambda, process, budget.max_depth, &moved, &mut search);
            let mut out = Vec::new();
            for s in sols {
                if &s.dused == delta && &s.lused == lambda && !out.contains(&s.deriv) {
                    out.push(s.deriv);
                }
            }
            out
        }
        (System::Ill, Judgment::Ill { gamma, delta, process, right_name, right_type }) => {
            let lambda = Context::singleton(right_name.clone(), right_type.clone());
            let moved = BTreeSet::new();
            let sols = solve2(gamma, delta, &lambda, process, budget.max_depth, &moved, &mut search);
            let mut out = Vec::new();
            for s in sols {
                if &s.dused == delta && s.lused == lambda {
                    let d = ull_to_ill_derivation(&s.deriv);
                    if !out.contains(&d) {
                        out.push(d);
                    }
                }
            }
            out
        }
        (System::Cll, Judgment::Cll { process, gamma, delta }) => {
            let sols = solve1(gamma, delta, process, budget.max_depth, &mut search);
            let mut out = Vec::new();
            for s in sols {
                if &s.dused == delta && !out.contains(&s.deriv) {
                    out.push(s.deriv);
                }
            }
            out
        }
        _ => Vec::new(),
    }
}

/// Searches for one derivation of the judgment. Sound: every returned
/// derivation passes `check_derivation`.
pub fn infer(
    j: &Judgment,
    config: &Config,
    budget: &InferenceBudget,
) -> Result<Derivation, InferError> {
    let mut search = search_for(config, budget);
    search.cap = 1;
    let found = match (config.system, j) {
        (System::Ull | System::Ullm, Judgment::Ull { gamma, delta, process, lambda }) => {
            let moved = BTreeSet::new();
            // first-solution mode still needs inner alternatives, so the cap
            // applies per goal, not globally
            search.cap = GOAL_CAP;
            solve2(gamma, delta, lambda, process, budget.max_depth, &moved, &mut search)
                .into_iter()
                .find(|s| &s.dused == delta && &s.lused == lambda)
                .map(|s| s.deriv)
        }
        (System::Ill, Judgment::Ill { gamma, delta, process, right_name, right_type }) => {
            let lambda = Context::singleton(right_name.clone(), right_type.clone());
            let moved = BTreeSet::new();
            search.cap = GOAL_CAP;
            solve2(gamma, delta, &lambda, process, budget.max_depth, &moved, &mut search)
                .into_iter()
                .find(|s| &s.dused == delta && s.lused == lambda)
                .map(|s| ull_to_ill_derivation(&s.deriv))
        }
        (System::Cll, Judgment::Cll { process, gamma, delta }) => {
            search.cap = GOAL_CAP;
            solve1(gamma, delta, process, budget.max_depth, &mut search)
                .into_iter()
                .find(|s| &s.dused == delta)
                .map(|s| s.deriv)
        }
        _ => None,
    };
    match found {
        Some(d) => {
            debug_assert!(check_derivation(&d, config).is_ok());
            Ok(d)
        }
        None => {
            if let Some(x) = search.annotation_hint {
                return Err(InferError::AnnotationRequired(x));
            }
            let trace = match search.deepest {
                Some((_, j)) => format!("; deepest open goal: {j}"),
                None => String::new(),
            };
            Err(InferError::NotFound(trace))
        }
    }
}

/// Enumerates all derivable completions of goals for a fixed process, with
/// region assignments drawn from the type universe, deduplicated by
/// derivation. The unrestricted region is left empty.
pub fn infer_all(
    process: &Process,
    universe: &[TypeExpr],
    config: &Config,
    budget: &InferenceBudget,
) -> Vec<(Judgment, Derivation)> {
    let names: Vec<Name> = process.free_names().into_iter().collect();
    let mut out: Vec<(Judgment, Derivation)> = Vec::new();
    let budget = InferenceBudget {
        type_universe: if budget.type_universe.is_empty() {
            universe.to_vec()
        } else {
            budget.type_universe.clone()
        },
        ..budget.clone()
    };
    for judgment in enumerate_goals(process, &names, universe, config.system) {
        for d in solve_goals(&judgment, config, &budget, GOAL_CAP) {
            if !out.iter().any(|(_, e)| e == &d) {
                out.push((judgment.clone(), d));
            }
        }
    }
    out
}

/// All judgments over the given names with types from the universe.
pub(crate) fn enumerate_goals(
    process: &Process,
    names: &[Name],
    universe: &[TypeExpr],
    system: System,
) -> Vec<Judgment> {
    let mut goals = Vec::new();
    match system {
        System::Ull | System::Ullm => {
            // each name goes left or right with any universe type
            let mut stack: Vec<(usize, Context, Context)> =
                vec![(0, Context::empty(), Context::empty())];
            while let Some((i, delta, lambda)) = stack.pop() {
                if i == names.len() {
                    goals.push(Judgment::Ull {
                        gamma: Context::empty(),
                        delta,
                        process: process.clone(),
                        lambda,
                    });
                    continue;
                }
                for t in universe {
                    stack.push((
                        i + 1,
                        delta.extended(names[i].clone(), t.clone()),
                        lambda.clone(),
                    ));
                    stack.push((
                        i + 1,
                        delta.clone(),
                        lambda.extended(names[i].clone(), t.clone()),
                    ));
                }
            }
        }
        System::Cll => {
            let mut stack: Vec<(usize, Context)> = vec![(0, Context::empty())];
            while let Some((i, delta)) = stack.pop() {
                if i == names.len() {
                    goals.push(Judgment::Cll {
                        process: process.clone(),
                        gamma: Context::empty(),
                        delta,
                    });
                    continue;
                }
                for t in universe {
                    stack.push((i + 1, delta.extended(names[i].clone(), t.clone())));
                }
            }
        }
        System::Ill => {
            let ill_universe: Vec<&TypeExpr> =
                universe.iter().filter(|t| t.in_ill_grammar()).collect();
            // choose which name is offered on the right (or a fresh one when
            // the process has no free names)
            let mut right_choices: Vec<Name> = names.to_vec();
            if right_choices.is_empty() {
                right_choices.push("z_goal".to_string());
            } else {
                let mut avoid: BTreeSet<Name> = names.iter().cloned().collect();
                avoid.extend(process.bound_names());
                right_choices.push(crate::ast::fresh_name("z", &avoid));
            }
            for right in right_choices {
                let lefts: Vec<Name> = names.iter().filter(|n| **n != right).cloned().collect();
                let mut stack: Vec<(usize, Context)> = vec![(0, Context::empty())];
                while let Some((i, delta)) = stack.pop() {
                    if i == lefts.len() {
                        for rt in &ill_universe {
                            goals.push(Judgment::Ill {
                                gamma: Context::empty(),
                                delta: delta.clone(),
                                process: process.clone(),
                                right_name: right.clone(),
                                right_type: (*rt).clone(),
                            });
                        }
                        continue;
                    }
                    for t in &ill_universe {
                        stack.push((i + 1, delta.extended(lefts[i].clone(), (*t).clone())));
                    }
                }
            }
        }
    }
    goals.retain(|g| g.well_formed().is_ok());
    goals
}
