//! Core syntax: session types, processes, contexts and judgments.
//!
//! Types and processes are plain immutable trees. All operations here are
//! pure functions, so values can be shared freely across threads.

use std::collections::BTreeSet;
use std::fmt;

pub type Name = String;
pub type Label = String;

/// Session types / linear-logic propositions.
///
/// `⅋` is not a constructor: `A par B` is surface sugar for `dual(A) -o B`,
/// so duality stays total and the rule tables stay small.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeExpr {
    One,
    Bot,
    Tensor(Box<TypeExpr>, Box<TypeExpr>),
    Lolli(Box<TypeExpr>, Box<TypeExpr>),
    Plus(Branches),
    With(Branches),
    Bang(Box<TypeExpr>),
    Query(Box<TypeExpr>),
}

/// Nonempty, order-preserving label map. Compared as a set of pairs.
#[derive(Debug, Clone, Eq, Hash, PartialOrd, Ord)]
pub struct Branches(Vec<(Label, TypeExpr)>);

impl Branches {
    /// Panics on an empty arm list or duplicate labels.
    pub fn new(arms: Vec<(Label, TypeExpr)>) -> Self {
        assert!(!arms.is_empty(), "branch label map must be nonempty");
        let mut seen = BTreeSet::new();
        for (l, _) in &arms {
            assert!(seen.insert(l.clone()), "duplicate branch label {l}");
        }
        Branches(arms)
    }

    pub fn arms(&self) -> &[(Label, TypeExpr)] {
        &self.0
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.0.iter().map(|(l, _)| l)
    }

    pub fn get(&self, label: &str) -> Option<&TypeExpr> {
        self.0.iter().find(|(l, _)| l == label).map(|(_, t)| t)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn map<F: FnMut(&TypeExpr) -> TypeExpr>(&self, mut f: F) -> Branches {
        Branches(self.0.iter().map(|(l, t)| (l.clone(), f(t))).collect())
    }
}

impl PartialEq for Branches {
    fn eq(&self, other: &Self) -> bool {
        if self.0.len() != other.0.len() {
            return false;
        }
        self.0
            .iter()
            .all(|(l, t)| other.get(l).map_or(false, |u| u == t))
    }
}

impl TypeExpr {
    pub fn tensor(a: TypeExpr, b: TypeExpr) -> TypeExpr {
        TypeExpr::Tensor(Box::new(a), Box::new(b))
    }

    pub fn lolli(a: TypeExpr, b: TypeExpr) -> TypeExpr {
        TypeExpr::Lolli(Box::new(a), Box::new(b))
    }

    /// `A ⅋ B`, desugared through duality.
    pub fn par(a: TypeExpr, b: TypeExpr) -> TypeExpr {
        TypeExpr::lolli(a.dual(), b)
    }

    pub fn bang(a: TypeExpr) -> TypeExpr {
        TypeExpr::Bang(Box::new(a))
    }

    pub fn query(a: TypeExpr) -> TypeExpr {
        TypeExpr::Query(Box::new(a))
    }

    /// Duality `¬A`; total and involutive.
    pub fn dual(&self) -> TypeExpr {
        match self {
            TypeExpr::One => TypeExpr::Bot,
            TypeExpr::Bot => TypeExpr::One,
            TypeExpr::Tensor(a, b) => TypeExpr::lolli((**a).clone(), b.dual()),
            TypeExpr::Lolli(a, b) => TypeExpr::tensor((**a).clone(), b.dual()),
            TypeExpr::Plus(bs) => TypeExpr::With(bs.map(|t| t.dual())),
            TypeExpr::With(bs) => TypeExpr::Plus(bs.map(|t| t.dual())),
            TypeExpr::Bang(a) => TypeExpr::query(a.dual()),
            TypeExpr::Query(a) => TypeExpr::bang(a.dual()),
        }
    }

    /// True iff the type never mentions `bot` or `?`, i.e. it belongs to the
    /// intuitionistic type grammar.
    pub fn in_ill_grammar(&self) -> bool {
        match self {
            TypeExpr::One => true,
            TypeExpr::Bot => false,
            TypeExpr::Query(_) => false,
            TypeExpr::Tensor(a, b) | TypeExpr::Lolli(a, b) => {
                a.in_ill_grammar() && b.in_ill_grammar()
            }
            TypeExpr::Plus(bs) | TypeExpr::With(bs) => {
                bs.arms().iter().all(|(_, t)| t.in_ill_grammar())
            }
            TypeExpr::Bang(a) => a.in_ill_grammar(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            TypeExpr::One | TypeExpr::Bot => 1,
            TypeExpr::Tensor(a, b) | TypeExpr::Lolli(a, b) => 1 + a.size() + b.size(),
            TypeExpr::Plus(bs) | TypeExpr::With(bs) => {
                1 + bs.arms().iter().map(|(_, t)| t.size()).sum::<usize>()
            }
            TypeExpr::Bang(a) | TypeExpr::Query(a) => 1 + a.size(),
        }
    }

    /// All subterms, including the type itself.
    pub fn subterms(&self) -> Vec<TypeExpr> {
        let mut out = vec![self.clone()];
        match self {
            TypeExpr::One | TypeExpr::Bot => {}
            TypeExpr::Tensor(a, b) | TypeExpr::Lolli(a, b) => {
                out.extend(a.subterms());
                out.extend(b.subterms());
            }
            TypeExpr::Plus(bs) | TypeExpr::With(bs) => {
                for (_, t) in bs.arms() {
                    out.extend(t.subterms());
                }
            }
            TypeExpr::Bang(a) | TypeExpr::Query(a) => out.extend(a.subterms()),
        }
        out
    }
}

/// Process terms.
///
/// The bound send `ν y x⟨y⟩.(P ‖ Q)` is the composite
/// `Restrict(y, Output(x, y, Par(P, Q)))`; the client request `ν x u⟨x⟩.P`
/// is `Restrict(x, Output(u, x, P))`. `CloseOut` has no continuation and
/// `WaitIn` exactly one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Process {
    Inact,
    Restrict {
        name: Name,
        annotation: Option<TypeExpr>,
        body: Box<Process>,
    },
    Par(Box<Process>, Box<Process>),
    Output {
        channel: Name,
        payload: Name,
        body: Box<Process>,
    },
    Input {
        channel: Name,
        binder: Name,
        body: Box<Process>,
    },
    Select {
        channel: Name,
        label: Label,
        body: Box<Process>,
    },
    Branch {
        channel: Name,
        arms: Vec<(Label, Process)>,
    },
    Server {
        channel: Name,
        binder: Name,
        body: Box<Process>,
    },
    Forward(Name, Name),
    CloseOut(Name),
    WaitIn {
        channel: Name,
        body: Box<Process>,
    },
}

impl Process {
    pub fn restrict(name: impl Into<Name>, body: Process) -> Process {
        Process::Restrict {
            name: name.into(),
            annotation: None,
            body: Box::new(body),
        }
    }

    pub fn restrict_ann(name: impl Into<Name>, ann: TypeExpr, body: Process) -> Process {
        Process::Restrict {
            name: name.into(),
            annotation: Some(ann),
            body: Box::new(body),
        }
    }

    pub fn par(a: Process, b: Process) -> Process {
        Process::Par(Box::new(a), Box::new(b))
    }

    /// `ν y x⟨y⟩.(P ‖ Q)` — the bound send.
    pub fn send_pair(x: impl Into<Name>, y: impl Into<Name>, p: Process, q: Process) -> Process {
        let y = y.into();
        Process::Restrict {
            name: y.clone(),
            annotation: None,
            body: Box::new(Process::Output {
                channel: x.into(),
                payload: y,
                body: Box::new(Process::par(p, q)),
            }),
        }
    }

    /// `ν x u⟨x⟩.P` — the client request.
    pub fn send_one(u: impl Into<Name>, x: impl Into<Name>, p: Process) -> Process {
        let x = x.into();
        Process::Restrict {
            name: x.clone(),
            annotation: None,
            body: Box::new(Process::Output {
                channel: u.into(),
                payload: x,
                body: Box::new(p),
            }),
        }
    }

    pub fn input(x: impl Into<Name>, y: impl Into<Name>, p: Process) -> Process {
        Process::Input {
            channel: x.into(),
            binder: y.into(),
            body: Box::new(p),
        }
    }

    pub fn select(x: impl Into<Name>, l: impl Into<Label>, p: Process) -> Process {
        Process::Select {
            channel: x.into(),
            label: l.into(),
            body: Box::new(p),
        }
    }

    pub fn server(x: impl Into<Name>, y: impl Into<Name>, p: Process) -> Process {
        Process::Server {
            channel: x.into(),
            binder: y.into(),
            body: Box::new(p),
        }
    }

    pub fn wait(x: impl Into<Name>, p: Process) -> Process {
        Process::WaitIn {
            channel: x.into(),
            body: Box::new(p),
        }
    }

    pub fn fwd(x: impl Into<Name>, y: impl Into<Name>) -> Process {
        Process::Forward(x.into(), y.into())
    }

    pub fn close(x: impl Into<Name>) -> Process {
        Process::CloseOut(x.into())
    }

    pub fn size(&self) -> usize {
        match self {
            Process::Inact | Process::Forward(_, _) | Process::CloseOut(_) => 1,
            Process::Restrict { body, .. }
            | Process::Output { body, .. }
            | Process::Input { body, .. }
            | Process::Select { body, .. }
            | Process::Server { body, .. }
            | Process::WaitIn { body, .. } => 1 + body.size(),
            Process::Par(a, b) => 1 + a.size() + b.size(),
            Process::Branch { arms, .. } => {
                1 + arms.iter().map(|(_, p)| p.size()).sum::<usize>()
            }
        }
    }

    pub fn free_names(&self) -> BTreeSet<Name> {
        match self {
            Process::Inact => BTreeSet::new(),
            Process::Forward(x, y) => [x.clone(), y.clone()].into_iter().collect(),
            Process::CloseOut(x) => [x.clone()].into_iter().collect(),
            Process::Restrict { name, body, .. } => {
                let mut s = body.free_names();
                s.remove(name);
                s
            }
            Process::Par(a, b) => {
                let mut s = a.free_names();
                s.extend(b.free_names());
                s
            }
            Process::Output {
                channel,
                payload,
                body,
            } => {
                let mut s = body.free_names();
                s.insert(channel.clone());
                s.insert(payload.clone());
                s
            }
            Process::Input {
                channel,
                binder,
                body,
            }
            | Process::Server {
                channel,
                binder,
                body,
            } => {
                let mut s = body.free_names();
                s.remove(binder);
                s.insert(channel.clone());
                s
            }
            Process::Select { channel, body, .. } => {
                let mut s = body.free_names();
                s.insert(channel.clone());
                s
            }
            Process::Branch { channel, arms } => {
                let mut s: BTreeSet<Name> = BTreeSet::new();
                for (_, p) in arms {
                    s.extend(p.free_names());
                }
                s.insert(channel.clone());
                s
            }
            Process::WaitIn { channel, body } => {
                let mut s = body.free_names();
                s.insert(channel.clone());
                s
            }
        }
    }

    pub fn bound_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.collect_bound(&mut out);
        out
    }

    fn collect_bound(&self, out: &mut BTreeSet<Name>) {
        match self {
            Process::Inact | Process::Forward(_, _) | Process::CloseOut(_) => {}
            Process::Restrict { name, body, .. } => {
                out.insert(name.clone());
                body.collect_bound(out);
            }
            Process::Par(a, b) => {
                a.collect_bound(out);
                b.collect_bound(out);
            }
            Process::Output { body, .. }
            | Process::Select { body, .. }
            | Process::WaitIn { body, .. } => body.collect_bound(out),
            Process::Input { binder, body, .. } | Process::Server { binder, body, .. } => {
                out.insert(binder.clone());
                body.collect_bound(out);
            }
            Process::Branch { arms, .. } => {
                for (_, p) in arms {
                    p.collect_bound(out);
                }
            }
        }
    }

    /// Capture-avoiding substitution `P{replacement/target}` on free names.
    pub fn substitute(&self, replacement: &str, target: &str) -> Process {
        if replacement == target {
            return self.clone();
        }
        let sub = |n: &Name| -> Name {
            if n == target {
                replacement.to_string()
            } else {
                n.clone()
            }
        };
        match self {
            Process::Inact => Process::Inact,
            Process::Forward(x, y) => Process::Forward(sub(x), sub(y)),
            Process::CloseOut(x) => Process::CloseOut(sub(x)),
            Process::Par(a, b) => Process::par(
                a.substitute(replacement, target),
                b.substitute(replacement, target),
            ),
            Process::Output {
                channel,
                payload,
                body,
            } => Process::Output {
                channel: sub(channel),
                payload: sub(payload),
                body: Box::new(body.substitute(replacement, target)),
            },
            Process::Select {
                channel,
                label,
                body,
            } => Process::Select {
                channel: sub(channel),
                label: label.clone(),
                body: Box::new(body.substitute(replacement, target)),
            },
            Process::Branch { channel, arms } => Process::Branch {
                channel: sub(channel),
                arms: arms
                    .iter()
                    .map(|(l, p)| (l.clone(), p.substitute(replacement, target)))
                    .collect(),
            },
            Process::WaitIn { channel, body } => Process::WaitIn {
                channel: sub(channel),
                body: Box::new(body.substitute(replacement, target)),
            },
            Process::Restrict {
                name,
                annotation,
                body,
            } => {
                if name == target {
                    // target is shadowed here
                    return Process::Restrict {
                        name: name.clone(),
                        annotation: annotation.clone(),
                        body: body.clone(),
                    };
                }
                if name == replacement && body.free_names().contains(target) {
                    // capture: rename the binder first
                    let mut avoid = body.free_names();
                    avoid.insert(replacement.to_string());
                    avoid.insert(target.to_string());
                    let fresh = fresh_name(name, &avoid);
                    let renamed = body.substitute(&fresh, name);
                    Process::Restrict {
                        name: fresh,
                        annotation: annotation.clone(),
                        body: Box::new(renamed.substitute(replacement, target)),
                    }
                } else {
                    Process::Restrict {
                        name: name.clone(),
                        annotation: annotation.clone(),
                        body: Box::new(body.substitute(replacement, target)),
                    }
                }
            }
            Process::Input {
                channel,
                binder,
                body,
            } => {
                let channel = sub(channel);
                if binder == target {
                    return Process::Input {
                        channel,
                        binder: binder.clone(),
                        body: body.clone(),
                    };
                }
                if binder == replacement && body.free_names().contains(target) {
                    let mut avoid = body.free_names();
                    avoid.insert(replacement.to_string());
                    avoid.insert(target.to_string());
                    let fresh = fresh_name(binder, &avoid);
                    let renamed = body.substitute(&fresh, binder);
                    Process::Input {
                        channel,
                        binder: fresh,
                        body: Box::new(renamed.substitute(replacement, target)),
                    }
                } else {
                    Process::Input {
                        channel,
                        binder: binder.clone(),
                        body: Box::new(body.substitute(replacement, target)),
                    }
                }
            }
            Process::Server {
                channel,
                binder,
                body,
            } => {
                let channel = sub(channel);
                if binder == target {
                    return Process::Server {
                        channel,
                        binder: binder.clone(),
                        body: body.clone(),
                    };
                }
                if binder == replacement && body.free_names().contains(target) {
                    let mut avoid = body.free_names();
                    avoid.insert(replacement.to_string());
                    avoid.insert(target.to_string());
                    let fresh = fresh_name(binder, &avoid);
                    let renamed = body.substitute(&fresh, binder);
                    Process::Server {
                        channel,
                        binder: fresh,
                        body: Box::new(renamed.substitute(replacement, target)),
                    }
                } else {
                    Process::Server {
                        channel,
                        binder: binder.clone(),
                        body: Box::new(body.substitute(replacement, target)),
                    }
                }
            }
        }
    }

    /// Alpha-equivalence: identical up to consistent renaming of bound names.
    pub fn alpha_eq(&self, other: &Process) -> bool {
        fn go(p: &Process, q: &Process, pm: &mut Vec<(Name, Name)>) -> bool {
            let look = |n: &Name, pm: &Vec<(Name, Name)>, left: bool| -> Name {
                for (a, b) in pm.iter().rev() {
                    if left && a == n {
                        return b.clone();
                    }
                    if !left && b == n {
                        return a.clone();
                    }
                }
                n.clone()
            };
            // a free (unmapped) name on one side must not collide with a
            // binder image on the other; using fresh canonical tokens for
            // each binder pair avoids that, implemented here by pushing the
            // pair and comparing through the map in both directions.
            let name_eq = |a: &Name, b: &Name, pm: &Vec<(Name, Name)>| -> bool {
                look(a, pm, true) == *b && look(b, pm, false) == *a
            };
            match (p, q) {
                (Process::Inact, Process::Inact) => true,
                (Process::Forward(a, b), Process::Forward(c, d)) => {
                    name_eq(a, c, pm) && name_eq(b, d, pm)
                }
                (Process::CloseOut(a), Process::CloseOut(b)) => name_eq(a, b, pm),
                (Process::Par(a, b), Process::Par(c, d)) => go(a, c, pm) && go(b, d, pm),
                (
                    Process::Output {
                        channel: c1,
                        payload: p1,
                        body: b1,
                    },
                    Process::Output {
                        channel: c2,
                        payload: p2,
                        body: b2,
                    },
                ) => name_eq(c1, c2, pm) && name_eq(p1, p2, pm) && go(b1, b2, pm),
                (
                    Process::Select {
                        channel: c1,
                        label: l1,
                        body: b1,
                    },
                    Process::Select {
                        channel: c2,
                        label: l2,
                        body: b2,
                    },
                ) => l1 == l2 && name_eq(c1, c2, pm) && go(b1, b2, pm),
                (
                    Process::Branch {
                        channel: c1,
                        arms: a1,
                    },
                    Process::Branch {
                        channel: c2,
                        arms: a2,
                    },
                ) => {
                    name_eq(c1, c2, pm)
                        && a1.len() == a2.len()
                        && a1.iter().all(|(l, p1)| {
                            a2.iter().any(|(m, p2)| l == m && go(p1, p2, pm))
                        })
                }
                (
                    Process::WaitIn {
                        channel: c1,
                        body: b1,
                    },
                    Process::WaitIn {
                        channel: c2,
                        body: b2,
                    },
                ) => name_eq(c1, c2, pm) && go(b1, b2, pm),
                (
                    Process::Restrict {
                        name: n1, body: b1, ..
                    },
                    Process::Restrict {
                        name: n2, body: b2, ..
                    },
                ) => {
                    pm.push((n1.clone(), n2.clone()));
                    let r = go(b1, b2, pm);
                    pm.pop();
                    r
                }
                (
                    Process::Input {
                        channel: c1,
                        binder: n1,
                        body: b1,
                    },
                    Process::Input {
                        channel: c2,
                        binder: n2,
                        body: b2,
                    },
                ) => {
                    if !name_eq(c1, c2, pm) {
                        return false;
                    }
                    pm.push((n1.clone(), n2.clone()));
                    let r = go(b1, b2, pm);
                    pm.pop();
                    r
                }
                (
                    Process::Server {
                        channel: c1,
                        binder: n1,
                        body: b1,
                    },
                    Process::Server {
                        channel: c2,
                        binder: n2,
                        body: b2,
                    },
                ) => {
                    if !name_eq(c1, c2, pm) {
                        return false;
                    }
                    pm.push((n1.clone(), n2.clone()));
                    let r = go(b1, b2, pm);
                    pm.pop();
                    r
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }

    /// Renames bound names so they are pairwise distinct and distinct from
    /// all free names (Barendregt convention). Alpha-equivalent result.
    pub fn normalize(&self) -> Process {
        fn go(p: &Process, used: &mut BTreeSet<Name>) -> Process {
            match p {
                Process::Inact | Process::Forward(_, _) | Process::CloseOut(_) => p.clone(),
                Process::Par(a, b) => {
                    let a = go(a, used);
                    let b = go(b, used);
                    Process::par(a, b)
                }
                Process::Output {
                    channel,
                    payload,
                    body,
                } => Process::Output {
                    channel: channel.clone(),
                    payload: payload.clone(),
                    body: Box::new(go(body, used)),
                },
                Process::Select {
                    channel,
                    label,
                    body,
                } => Process::Select {
                    channel: channel.clone(),
                    label: label.clone(),
                    body: Box::new(go(body, used)),
                },
                Process::Branch { channel, arms } => Process::Branch {
                    channel: channel.clone(),
                    arms: arms.iter().map(|(l, p)| (l.clone(), go(p, used))).collect(),
                },
                Process::WaitIn { channel, body } => Process::WaitIn {
                    channel: channel.clone(),
                    body: Box::new(go(body, used)),
                },
                Process::Restrict {
                    name,
                    annotation,
                    body,
                } => {
                    let (name, body) = rebind(name, body, used);
                    Process::Restrict {
                        name,
                        annotation: annotation.clone(),
                        body: Box::new(body),
                    }
                }
                Process::Input {
                    channel,
                    binder,
                    body,
                } => {
                    let (binder, body) = rebind(binder, body, used);
                    Process::Input {
                        channel: channel.clone(),
                        binder,
                        body: Box::new(body),
                    }
                }
                Process::Server {
                    channel,
                    binder,
                    body,
                } => {
                    let (binder, body) = rebind(binder, body, used);
                    Process::Server {
                        channel: channel.clone(),
                        binder,
                        body: Box::new(body),
                    }
                }
            }
        }
        fn rebind(name: &Name, body: &Process, used: &mut BTreeSet<Name>) -> (Name, Process) {
            if used.contains(name) {
                let fresh = fresh_name(name, used);
                used.insert(fresh.clone());
                let body = body.substitute(&fresh, name);
                (fresh.clone(), go(&body, used))
            } else {
                used.insert(name.clone());
                (name.clone(), go(body, used))
            }
        }
        let mut used = self.free_names();
        go(self, &mut used)
    }

    pub fn is_barendregt(&self) -> bool {
        fn binders(p: &Process, out: &mut Vec<Name>) {
            match p {
                Process::Inact | Process::Forward(_, _) | Process::CloseOut(_) => {}
                Process::Par(a, b) => {
                    binders(a, out);
                    binders(b, out);
                }
                Process::Output { body, .. }
                | Process::Select { body, .. }
                | Process::WaitIn { body, .. } => binders(body, out),
                Process::Restrict { name, body, .. } => {
                    out.push(name.clone());
                    binders(body, out);
                }
                Process::Input { binder, body, .. } | Process::Server { binder, body, .. } => {
                    out.push(binder.clone());
                    binders(body, out);
                }
                Process::Branch { arms, .. } => {
                    for (_, p) in arms {
                        binders(p, out);
                    }
                }
            }
        }
        let mut bs = Vec::new();
        binders(self, &mut bs);
        let free = self.free_names();
        let mut seen = BTreeSet::new();
        bs.iter().all(|b| seen.insert(b.clone()) && !free.contains(b))
    }
}

/// Smallest `base`, `base1`, `base2`, ... not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> Name {
    if !avoid.contains(base) {
        return base.to_string();
    }
    let stem: String = base.trim_end_matches(|c: char| c.is_ascii_digit()).to_string();
    let stem = if stem.is_empty() { "x".to_string() } else { stem };
    for i in 1.. {
        let cand = format!("{stem}{i}");
        if !avoid.contains(&cand) {
            return cand;
        }
    }
    unreachable!()
}

/// Ordered name → type map; no duplicate names. Compared as a set.
#[derive(Debug, Clone, Eq, Default)]
pub struct Context(Vec<(Name, TypeExpr)>);

impl Context {
    pub fn empty() -> Context {
        Context(Vec::new())
    }

    pub fn from_pairs(pairs: Vec<(Name, TypeExpr)>) -> Context {
        let mut ctx = Context::empty();
        for (n, t) in pairs {
            ctx.insert(n, t);
        }
        ctx
    }

    pub fn singleton(n: impl Into<Name>, t: TypeExpr) -> Context {
        Context(vec![(n.into(), t)])
    }

    pub fn insert(&mut self, n: impl Into<Name>, t: TypeExpr) {
        let n = n.into();
        assert!(
            self.get(&n).is_none(),
            "duplicate name {n} in context"
        );
        self.0.push((n, t));
    }

    /// Non-destructive extension; panics on duplicates.
    pub fn extended(&self, n: impl Into<Name>, t: TypeExpr) -> Context {
        let mut c = self.clone();
        c.insert(n, t);
        c
    }

    pub fn get(&self, n: &str) -> Option<&TypeExpr> {
        self.0.iter().find(|(m, _)| m == n).map(|(_, t)| t)
    }

    pub fn remove(&self, n: &str) -> Option<(Context, TypeExpr)> {
        let i = self.0.iter().position(|(m, _)| m == n)?;
        let mut v = self.0.clone();
        let (_, t) = v.remove(i);
        Some((Context(v), t))
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.0.iter().map(|(n, _)| n)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Name, TypeExpr)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Union of disjoint contexts; panics on a duplicate name.
    pub fn union(&self, other: &Context) -> Context {
        let mut c = self.clone();
        for (n, t) in other.iter() {
            c.insert(n.clone(), t.clone());
        }
        c
    }

    pub fn disjoint(&self, other: &Context) -> bool {
        self.names().all(|n| other.get(n).is_none())
    }

    /// Pointwise dual, preserving order.
    pub fn dual(&self) -> Context {
        Context(self.0.iter().map(|(n, t)| (n.clone(), t.dual())).collect())
    }

    /// Set difference `self \ other` by name, requiring matching types.
    pub fn subtract(&self, other: &Context) -> Option<Context> {
        let mut left = self.clone();
        for (n, t) in other.iter() {
            let (rest, u) = left.remove(n)?;
            if &u != t {
                return None;
            }
            left = rest;
        }
        Some(left)
    }
}

impl PartialEq for Context {
    fn eq(&self, other: &Self) -> bool {
        if self.0.len() != other.0.len() {
            return false;
        }
        self.0
            .iter()
            .all(|(n, t)| other.get(n).map_or(false, |u| u == t))
    }
}

impl FromIterator<(Name, TypeExpr)> for Context {
    fn from_iter<I: IntoIterator<Item = (Name, TypeExpr)>>(iter: I) -> Self {
        Context::from_pairs(iter.into_iter().collect())
    }
}

/// The four systems a judgment or derivation can live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum System {
    Ull,
    Ullm,
    Ill,
    Cll,
}

impl System {
    pub fn tag(&self) -> &'static str {
        match self {
            System::Ull => "ull",
            System::Ullm => "ullm",
            System::Ill => "ill",
            System::Cll => "cll",
        }
    }

    pub fn from_tag(s: &str) -> Option<System> {
        match s {
            "ull" => Some(System::Ull),
            "ullm" => Some(System::Ullm),
            "ill" => Some(System::Ill),
            "cll" => Some(System::Cll),
            _ => None,
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A typing judgment in one of the three sequent shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum Judgment {
    /// `Γ; Δ ⊢ P :: Λ` (πULL and πULL↷)
    Ull {
        gamma: Context,
        delta: Context,
        process: Process,
        lambda: Context,
    },
    /// `Γ; Δ ⊢I P :: x:A`
    Ill {
        gamma: Context,
        delta: Context,
        process: Process,
        right_name: Name,
        right_type: TypeExpr,
    },
    /// `P ⊢C Γ; Δ`
    Cll {
        process: Process,
        gamma: Context,
        delta: Context,
    },
}

impl Judgment {
    pub fn process(&self) -> &Process {
        match self {
            Judgment::Ull { process, .. }
            | Judgment::Ill { process, .. }
            | Judgment::Cll { process, .. } => process,
        }
    }

    pub fn with_process(&self, p: Process) -> Judgment {
        let mut j = self.clone();
        match &mut j {
            Judgment::Ull { process, .. }
            | Judgment::Ill { process, .. }
            | Judgment::Cll { process, .. } => *process = p,
        }
        j
    }

    /// Shape/wellformedness checks shared by every rule: disjoint regions,
    /// free names covered, and for ILL the grammar restriction.
    pub fn well_formed(&self) -> Result<(), String> {
        match self {
            Judgment::Ull {
                gamma,
                delta,
                process,
                lambda,
            } => {
                if !gamma.disjoint(delta) || !gamma.disjoint(lambda) || !delta.disjoint(lambda) {
                    return Err("regions share a name".into());
                }
                let names: BTreeSet<&Name> = gamma
                    .names()
                    .chain(delta.names())
                    .chain(lambda.names())
                    .collect();
                for n in process.free_names() {
                    if !names.contains(&n) {
                        return Err(format!("free name {n} not assigned in the judgment"));
                    }
                }
                Ok(())
            }
            Judgment::Ill {
                gamma,
                delta,
                process,
                right_name,
                right_type,
            } => {
                if !gamma.disjoint(delta) {
                    return Err("regions share a name".into());
                }
                if gamma.get(right_name).is_some() || delta.get(right_name).is_some() {
                    return Err(format!("right name {right_name} reused on the left"));
                }
                for (n, t) in gamma.iter().chain(delta.iter()) {
                    if !t.in_ill_grammar() {
                        return Err(format!("type of {n} outside the intuitionistic grammar"));
                    }
                }
                if !right_type.in_ill_grammar() {
                    return Err(format!(
                        "type of {right_name} outside the intuitionistic grammar"
                    ));
                }
                let mut names: BTreeSet<&Name> =
                    gamma.names().chain(delta.names()).collect();
                names.insert(right_name);
                for n in process.free_names() {
                    if !names.contains(&n) {
                        return Err(format!("free name {n} not assigned in the judgment"));
                    }
                }
                Ok(())
            }
            Judgment::Cll {
                process,
                gamma,
                delta,
            } => {
                if !gamma.disjoint(delta) {
                    return Err("regions share a name".into());
                }
                let names: BTreeSet<&Name> = gamma.names().chain(delta.names()).collect();
                for n in process.free_names() {
                    if !names.contains(&n) {
                        return Err(format!("free name {n} not assigned in the judgment"));
                    }
                }
                Ok(())
            }
        }
    }

    /// Number of right-hand linear assignments (the r-degree of a ULL sequent).
    pub fn r_degree(&self) -> usize {
        match self {
            Judgment::Ull { lambda, .. } => lambda.len(),
            Judgment::Ill { .. } => 1,
            Judgment::Cll { delta, .. } => delta.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t_one() -> TypeExpr {
        TypeExpr::One
    }

    #[test]
    fn dual_clauses() {
        assert_eq!(t_one().dual(), TypeExpr::Bot);
        assert_eq!(TypeExpr::Bot.dual(), TypeExpr::One);
        // ?1 → !⊥ by composing the clauses
        assert_eq!(
            TypeExpr::query(t_one()).dual(),
            TypeExpr::bang(TypeExpr::Bot)
        );
        // ¬(A ⊗ B) = A ⊸ ¬B
        let ab = TypeExpr::tensor(t_one(), TypeExpr::Bot);
        assert_eq!(ab.dual(), TypeExpr::lolli(t_one(), TypeExpr::One));
    }

    #[test]
    fn dual_involution_on_branches() {
        let t = TypeExpr::Plus(Branches::new(vec![("l".into(), t_one())]));
        assert_eq!(t.dual().dual(), t);
    }

    #[test]
    fn de_morgan_par_sugar() {
        // dual(a ⅋ b) = dual(a) ⊗ dual(b) at the TypeExpr level
        let a = TypeExpr::query(t_one());
        let b = TypeExpr::Bot;
        let par = TypeExpr::par(a.clone(), b.clone());
        assert_eq!(par.dual(), TypeExpr::tensor(a.dual(), b.dual()));
    }

    #[test]
    fn ill_grammar() {
        assert!(TypeExpr::bang(t_one()).in_ill_grammar());
        assert!(!TypeExpr::lolli(TypeExpr::query(t_one()), t_one()).in_ill_grammar());
        assert!(!TypeExpr::tensor(t_one(), TypeExpr::Bot).in_ill_grammar());
    }

    #[test]
    fn free_names_binders() {
        let p = Process::fwd("x", "y");
        assert_eq!(
            p.free_names().into_iter().collect::<Vec<_>>(),
            vec!["x".to_string(), "y".to_string()]
        );
        let q = Process::restrict(
            "x",
            Process::par(Process::close("x"), Process::wait("x", Process::close("z"))),
        );
        assert_eq!(
            q.free_names().into_iter().collect::<Vec<_>>(),
            vec!["z".to_string()]
        );
        let r = Process::input("x", "y", Process::fwd("y", "w"));
        assert_eq!(
            r.free_names().into_iter().collect::<Vec<_>>(),
            vec!["w".to_string(), "x".to_string()]
        );
    }

    #[test]
    fn substitute_basic() {
        let p = Process::fwd("x", "y");
        assert_eq!(p.substitute("z", "x"), Process::fwd("z", "y"));
        let q = Process::close("z");
        assert_eq!(q.substitute("y", "x"), Process::close("z"));
    }

    #[test]
    fn substitute_capture_avoiding() {
        // Input(a, x, Forward(x,b)){x/b} must rename the binder
        let p = Process::input("a", "x", Process::fwd("x", "b"));
        let s = p.substitute("x", "b");
        match &s {
            Process::Input {
                channel,
                binder,
                body,
            } => {
                assert_eq!(channel, "a");
                assert_ne!(binder, "x");
                assert_eq!(**body, Process::fwd(binder, "x"));
            }
            _ => panic!("shape changed"),
        }
        // and the result is alpha-equal to the expected term
        assert!(s.alpha_eq(&Process::input("a", "v", Process::fwd("v", "x"))));
    }

    #[test]
    fn alpha_eq_examples() {
        let p = Process::input("x", "y", Process::fwd("y", "z"));
        let q = Process::input("x", "w", Process::fwd("w", "z"));
        assert!(p.alpha_eq(&q));
        assert!(!Process::fwd("x", "y").alpha_eq(&Process::fwd("y", "x")));
        assert!(p.alpha_eq(&p));
    }

    #[test]
    fn alpha_eq_binder_free_collision() {
        // new y (fwd x y is not alpha-eq to new x (fwd x x) shapes
        let p = Process::input("a", "y", Process::fwd("x", "y"));
        let q = Process::input("a", "x", Process::fwd("x", "x"));
        assert!(!p.alpha_eq(&q));
    }

    #[test]
    fn normalize_barendregt() {
        let p = Process::par(
            Process::input("a", "y", Process::close("y")),
            Process::input("b", "y", Process::close("y")),
        );
        assert!(!p.is_barendregt());
        let n = p.normalize();
        assert!(n.is_barendregt());
        assert!(n.alpha_eq(&p));
    }

    #[test]
    fn context_set_equality() {
        let a = Context::from_pairs(vec![("x".into(), t_one()), ("y".into(), TypeExpr::Bot)]);
        let b = Context::from_pairs(vec![("y".into(), TypeExpr::Bot), ("x".into(), t_one())]);
        assert_eq!(a, b);
    }
}
