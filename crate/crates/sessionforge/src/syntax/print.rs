//! Deterministic printers. `parse(print(v)) == v` for every grammar-shaped
//! value; same value always prints to the same bytes.

use crate::ast::{Context, Judgment, Process, TypeExpr};

// precedence levels: 0 = -o, 1 = par (never printed), 2 = *, 3 = unary/atom
fn ty_prec(t: &TypeExpr) -> u8 {
    match t {
        TypeExpr::Lolli(_, _) => 0,
        TypeExpr::Tensor(_, _) => 2,
        _ => 3,
    }
}

fn ty_at(t: &TypeExpr, min: u8, out: &mut String) {
    let prec = ty_prec(t);
    let paren = prec < min;
    if paren {
        out.push('(');
    }
    match t {
        TypeExpr::One => out.push('1'),
        TypeExpr::Bot => out.push_str("bot"),
        TypeExpr::Tensor(a, b) => {
            ty_at(a, 3, out);
            out.push_str(" * ");
            ty_at(b, 2, out);
        }
        TypeExpr::Lolli(a, b) => {
            ty_at(a, 1, out);
            out.push_str(" -o ");
            ty_at(b, 0, out);
        }
        TypeExpr::Plus(bs) => {
            out.push_str("+{");
            for (i, (l, u)) in bs.arms().iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(l);
                out.push_str(": ");
                ty_at(u, 0, out);
            }
            out.push('}');
        }
        TypeExpr::With(bs) => {
            out.push_str("&{");
            for (i, (l, u)) in bs.arms().iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(l);
                out.push_str(": ");
                ty_at(u, 0, out);
            }
            out.push('}');
        }
        TypeExpr::Bang(a) => {
            out.push('!');
            ty_at(a, 3, out);
        }
        TypeExpr::Query(a) => {
            out.push('?');
            ty_at(a, 3, out);
        }
    }
    if paren {
        out.push(')');
    }
}

pub fn print_type(t: &TypeExpr) -> String {
    let mut s = String::new();
    ty_at(t, 0, &mut s);
    s
}

fn proc_at(p: &Process, top: bool, out: &mut String) {
    match p {
        Process::Inact => out.push('0'),
        Process::Forward(x, y) => {
            out.push_str("fwd ");
            out.push_str(x);
            out.push(' ');
            out.push_str(y);
        }
        Process::CloseOut(x) => {
            out.push_str("close ");
            out.push_str(x);
        }
        Process::WaitIn { channel, body } => {
            out.push_str("wait ");
            out.push_str(channel);
            out.push_str(" . ");
            proc_at(body, false, out);
        }
        Process::Par(a, b) => {
            if !top {
                out.push('(');
            }
            proc_at(a, false, out);
            out.push_str(" | ");
            proc_at(b, true, out);
            if !top {
                out.push(')');
            }
        }
        Process::Restrict {
            name,
            annotation,
            body,
        } => match &**body {
            Process::Output {
                channel,
                payload,
                body: cont,
            } if payload == name && annotation.is_none() => {
                out.push_str("send ");
                out.push_str(channel);
                out.push('(');
                out.push_str(payload);
                out.push_str(").");
                match &**cont {
                    Process::Par(a, b) => {
                        out.push('(');
                        proc_at(a, false, out);
                        out.push_str(" | ");
                        proc_at(b, true, out);
                        out.push(')');
                    }
                    other => proc_at(other, false, out),
                }
            }
            other => {
                out.push_str("new ");
                out.push_str(name);
                if let Some(t) = annotation {
                    out.push(':');
                    out.push_str(&print_type(t));
                }
                out.push_str(" (");
                proc_at(other, true, out);
                out.push(')');
            }
        },
        // a bare output prefix has no dedicated surface form; it only occurs
        // inside the composites handled above
        Process::Output {
            channel,
            payload,
            body,
        } => {
            out.push_str("send ");
            out.push_str(channel);
            out.push('(');
            out.push_str(payload);
            out.push_str(").");
            proc_at(body, false, out);
        }
        Process::Input {
            channel,
            binder,
            body,
        } => {
            out.push_str("recv ");
            out.push_str(channel);
            out.push('(');
            out.push_str(binder);
            out.push_str("). ");
            proc_at(body, false, out);
        }
        Process::Server {
            channel,
            binder,
            body,
        } => {
            out.push_str("serv ");
            out.push_str(channel);
            out.push('(');
            out.push_str(binder);
            out.push_str("). ");
            proc_at(body, false, out);
        }
        Process::Select {
            channel,
            label,
            body,
        } => {
            out.push_str(channel);
            out.push_str(" << ");
            out.push_str(label);
            out.push_str(" . ");
            proc_at(body, false, out);
        }
        Process::Branch { channel, arms } => {
            out.push_str(channel);
            out.push_str(" >> { ");
            for (i, (l, p)) in arms.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(l);
                out.push_str(": ");
                proc_at(p, true, out);
            }
            out.push_str(" }");
        }
    }
}

pub fn print_process(p: &Process) -> String {
    let mut s = String::new();
    proc_at(p, true, &mut s);
    s
}

fn print_context(c: &Context, out: &mut String) {
    if c.is_empty() {
        out.push('.');
        return;
    }
    for (i, (n, t)) in c.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        out.push_str(n);
        out.push(':');
        out.push_str(&print_type(t));
    }
}

pub fn print_judgment(j: &Judgment) -> String {
    let mut s = String::new();
    match j {
        Judgment::Ull {
            gamma,
            delta,
            process,
            lambda,
        } => {
            print_context(gamma, &mut s);
            s.push_str(" ; ");
            print_context(delta, &mut s);
            s.push_str(" |- ");
            s.push_str(&print_process(process));
            s.push_str(" :: ");
            print_context(lambda, &mut s);
        }
        Judgment::Ill {
            gamma,
            delta,
            process,
            right_name,
            right_type,
        } => {
            print_context(gamma, &mut s);
            s.push_str(" ; ");
            print_context(delta, &mut s);
            s.push_str(" |-i ");
            s.push_str(&print_process(process));
            s.push_str(" :: ");
            s.push_str(right_name);
            s.push(':');
            s.push_str(&print_type(right_type));
        }
        Judgment::Cll {
            process,
            gamma,
            delta,
        } => {
            s.push_str(&print_process(process));
            s.push_str(" |-c ");
            print_context(gamma, &mut s);
            s.push_str(" ; ");
            print_context(delta, &mut s);
        }
    }
    s
}
