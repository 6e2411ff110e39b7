//! Deterministic pretty-printing for every syntax, as `Display` impls.
//!
//! Output round-trips through the parser up to alpha. Binder names come from
//! the stored hints, freshened against the free names of the scope body and
//! every enclosing binder name, so printing never captures.

use std::collections::BTreeSet;
use std::fmt::{self, Write};

use crate::eval::EvalContext;
use crate::logic::{Formula, Sequent, Sort};
use crate::syntax::{freshen, ATerm, AType, Effect, Name, Term, Type, Var};

const P_LOW: u8 = 0;
const P_APP: u8 = 1;
const P_ATOM: u8 = 2;

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Effect::Total => f.write_char('!'),
            Effect::General => f.write_char('?'),
        }
    }
}

struct Printer {
    env: Vec<Name>,
}

impl Printer {
    fn new() -> Self {
        Printer { env: Vec::new() }
    }

    fn bound(&self, i: u32) -> String {
        let idx = self.env.len() as i64 - 1 - i as i64;
        if idx >= 0 {
            self.env[idx as usize].clone()
        } else {
            format!("_b{i}")
        }
    }

    /// Picks printable names for the binders of a scope, given the free
    /// names of its body.
    fn pick(&self, hints: &[&str], body_free: BTreeSet<Name>) -> Vec<Name> {
        let mut avoid: BTreeSet<Name> = body_free;
        avoid.extend(self.env.iter().cloned());
        let mut out = Vec::new();
        for h in hints {
            let n = freshen(h, &avoid);
            avoid.insert(n.clone());
            out.push(n);
        }
        out
    }

    // --- implicit terms ---

    fn term(&mut self, f: &mut fmt::Formatter<'_>, t: &Term, prec: u8) -> fmt::Result {
        match t {
            Term::Var(Var::Free(n)) => f.write_str(n),
            Term::Var(Var::Bound(i)) => f.write_str(&self.bound(*i)),
            Term::Zero => f.write_char('0'),
            Term::Join => f.write_str("join"),
            Term::Terminates => f.write_str("tm"),
            Term::Contra => f.write_str("contra"),
            Term::Abort => f.write_str("abort"),
            Term::App(l, r) => self.wrap(f, prec, P_APP, |p, f| {
                p.term(f, l, P_APP)?;
                f.write_char(' ')?;
                p.term(f, r, P_ATOM)
            }),
            Term::Suc(a) => self.wrap(f, prec, P_APP, |p, f| {
                f.write_str("Suc ")?;
                p.term(f, a, P_ATOM)
            }),
            Term::Case(s, z, sc) => self.wrap(f, prec, P_APP, |p, f| {
                f.write_str("case ")?;
                p.term(f, s, P_ATOM)?;
                f.write_char(' ')?;
                p.term(f, z, P_ATOM)?;
                f.write_char(' ')?;
                p.term(f, sc, P_ATOM)
            }),
            Term::Lam(h, body) => self.wrap(f, prec, P_LOW, |p, f| {
                let x = p.pick(&[&h.0], body.free_vars()).remove(0);
                write!(f, "\\{x} . ")?;
                p.env.push(x);
                let r = p.term(f, body, P_LOW);
                p.env.pop();
                r
            }),
            Term::Rec(hf, hx, body) => self.wrap(f, prec, P_LOW, |p, f| {
                let names = p.pick(&[&hf.0, &hx.0], body.free_vars());
                write!(f, "rec {} ({}) = ", names[0], names[1])?;
                p.env.extend(names);
                let r = p.term(f, body, P_LOW);
                p.env.pop();
                p.env.pop();
                r
            }),
        }
    }

    fn wrap(
        &mut self,
        f: &mut fmt::Formatter<'_>,
        required: u8,
        natural: u8,
        body: impl FnOnce(&mut Self, &mut fmt::Formatter<'_>) -> fmt::Result,
    ) -> fmt::Result {
        if natural < required {
            f.write_char('(')?;
            body(self, f)?;
            f.write_char(')')
        } else {
            body(self, f)
        }
    }

    // --- annotated terms ---

    fn aterm(&mut self, f: &mut fmt::Formatter<'_>, t: &ATerm, prec: u8) -> fmt::Result {
        match t {
            ATerm::Var(Var::Free(n)) => f.write_str(n),
            ATerm::Var(Var::Bound(i)) => f.write_str(&self.bound(*i)),
            ATerm::Zero => f.write_char('0'),
            ATerm::App(l, r) => self.wrap(f, prec, P_APP, |p, f| {
                p.aterm(f, l, P_APP)?;
                f.write_char(' ')?;
                p.aterm(f, r, P_ATOM)
            }),
            ATerm::Suc(a) => self.wrap(f, prec, P_APP, |p, f| {
                f.write_str("Suc ")?;
                p.aterm(f, a, P_ATOM)
            }),
            ATerm::Join(l, r) => self.wrap(f, prec, P_APP, |p, f| {
                f.write_str("join ")?;
                p.aterm(f, l, P_ATOM)?;
                f.write_char(' ')?;
                p.aterm(f, r, P_ATOM)
            }),
            ATerm::Terminates(a) => self.wrap(f, prec, P_APP, |p, f| {
                f.write_str("tm ")?;
                p.aterm(f, a, P_ATOM)
            }),
            ATerm::Contra(ty, a) => self.wrap(f, prec, P_APP, |p, f| {
                f.write_str("contra ")?;
                p.atype(f, ty, P_ATOM)?;
                f.write_char(' ')?;
                p.aterm(f, a, P_ATOM)
            }),
            ATerm::Abort(ty) => self.wrap(f, prec, P_APP, |p, f| {
                f.write_str("abort ")?;
                p.atype(f, ty, P_ATOM)
            }),
            ATerm::Case(h, motive, s, z, sc) => self.wrap(f, prec, P_APP, |p, f| {
                let x = p.pick(&[&h.0], motive.free_vars()).remove(0);
                write!(f, "case [{x} . ")?;
                p.env.push(x);
                p.atype(f, motive, P_LOW)?;
                p.env.pop();
                f.write_str("] ")?;
                p.aterm(f, s, P_ATOM)?;
                f.write_char(' ')?;
                p.aterm(f, z, P_ATOM)?;
                f.write_char(' ')?;
                p.aterm(f, sc, P_ATOM)
            }),
            ATerm::Lam(e, h, dom, body) => self.wrap(f, prec, P_LOW, |p, f| {
                let x = p.pick(&[&h.0], body.free_vars()).remove(0);
                write!(f, "\\{e} {x} : ")?;
                p.atype(f, dom, P_LOW)?;
                f.write_str(" . ")?;
                p.env.push(x);
                let r = p.aterm(f, body, P_LOW);
                p.env.pop();
                r
            }),
            ATerm::Rec(hf, hx, dom, cod, body) => self.wrap(f, prec, P_LOW, |p, f| {
                let mut free = body.free_vars();
                free.extend(cod.free_vars());
                let names = p.pick(&[&hf.0, &hx.0], free);
                write!(f, "rec {} ({} : ", names[0], names[1])?;
                p.atype(f, dom, P_LOW)?;
                f.write_str(") : ")?;
                p.env.push(names[1].clone());
                p.atype(f, cod, P_LOW)?;
                p.env.pop();
                f.write_str(" = ")?;
                p.env.extend(names);
                let r = p.aterm(f, body, P_LOW);
                p.env.pop();
                p.env.pop();
                r
            }),
            ATerm::RecNat(hf, hx, hp, ann, body) => self.wrap(f, prec, P_LOW, |p, f| {
                let mut free = body.free_vars();
                free.extend(ann.free_vars());
                let names = p.pick(&[&hf.0, &hx.0, &hp.0], free);
                write!(f, "recnat {} ({}, {}) : ", names[0], names[1], names[2])?;
                p.env.push(names[1].clone());
                p.atype(f, ann, P_LOW)?;
                p.env.pop();
                f.write_str(" = ")?;
                p.env.extend(names);
                let r = p.aterm(f, body, P_LOW);
                p.env.truncate(p.env.len() - 3);
                r
            }),
            ATerm::Conv(h, pat, subj, proof) => self.wrap(f, prec, P_LOW, |p, f| {
                let x = p.pick(&[&h.0], pat.free_vars()).remove(0);
                write!(f, "conv [{x} . ")?;
                p.env.push(x);
                p.atype(f, pat, P_LOW)?;
                p.env.pop();
                f.write_str("] ")?;
                p.aterm(f, subj, P_APP)?;
                f.write_str(" by ")?;
                p.aterm(f, proof, P_APP)
            }),
            ATerm::Reflect(subj, proof) => self.wrap(f, prec, P_LOW, |p, f| {
                f.write_str("reflect ")?;
                p.aterm(f, subj, P_APP)?;
                f.write_str(" by ")?;
                p.aterm(f, proof, P_APP)
            }),
            ATerm::Inv(proof, sub) => self.wrap(f, prec, P_LOW, |p, f| {
                f.write_str("inv ")?;
                p.aterm(f, proof, P_APP)?;
                f.write_str(" at ")?;
                p.aterm(f, sub, P_APP)
            }),
        }
    }

    // --- types ---

    fn atype(&mut self, f: &mut fmt::Formatter<'_>, ty: &AType, prec: u8) -> fmt::Result {
        match ty {
            AType::Nat => f.write_str("nat"),
            AType::Terminates(a) => self.wrap(f, prec, P_APP, |p, f| {
                f.write_str("Term ")?;
                p.aterm(f, a, P_ATOM)
            }),
            AType::Eq(l, r) => self.wrap(f, prec, P_APP, |p, f| {
                p.aterm(f, l, P_APP)?;
                f.write_str(" = ")?;
                p.aterm(f, r, P_APP)
            }),
            AType::Pi(e, h, dom, cod) => self.wrap(f, prec, P_LOW, |p, f| {
                let x = p.pick(&[&h.0], cod.free_vars()).remove(0);
                write!(f, "Pi {e} {x} : ")?;
                p.atype(f, dom, P_LOW)?;
                f.write_str(" . ")?;
                p.env.push(x);
                let r = p.atype(f, cod, P_LOW);
                p.env.pop();
                r
            }),
        }
    }

    fn ty(&mut self, f: &mut fmt::Formatter<'_>, ty: &Type, prec: u8) -> fmt::Result {
        match ty {
            Type::Nat => f.write_str("nat"),
            Type::Terminates(a) => self.wrap(f, prec, P_APP, |p, f| {
                f.write_str("Term ")?;
                p.term(f, a, P_ATOM)
            }),
            Type::Eq(l, r) => self.wrap(f, prec, P_APP, |p, f| {
                p.term(f, l, P_APP)?;
                f.write_str(" = ")?;
                p.term(f, r, P_APP)
            }),
            Type::Pi(e, h, dom, cod) => self.wrap(f, prec, P_LOW, |p, f| {
                let x = p.pick(&[&h.0], cod.free_vars()).remove(0);
                write!(f, "Pi {e} {x} : ")?;
                p.ty(f, dom, P_LOW)?;
                f.write_str(" . ")?;
                p.env.push(x);
                let r = p.ty(f, cod, P_LOW);
                p.env.pop();
                r
            }),
        }
    }

    // --- formulas ---
    // Levels: 0 = quantifier, 1 = =>, 2 = /\, 3 = atom.

    fn formula(&mut self, f: &mut fmt::Formatter<'_>, fm: &Formula, prec: u8) -> fmt::Result {
        match fm {
            Formula::True => f.write_str("True"),
            Formula::Terminates(t) => self.fwrap(f, prec, 3, |p, f| {
                f.write_str("Term ")?;
                p.term(f, t, P_ATOM)
            }),
            Formula::Eq(l, r) => self.fwrap(f, prec, 3, |p, f| {
                p.term(f, l, P_APP)?;
                f.write_str(" = ")?;
                p.term(f, r, P_APP)
            }),
            Formula::And(l, r) => self.fwrap(f, prec, 2, |p, f| {
                p.formula(f, l, 3)?;
                f.write_str(" /\\ ")?;
                p.formula(f, r, 2)
            }),
            Formula::Imp(l, r) => self.fwrap(f, prec, 1, |p, f| {
                p.formula(f, l, 2)?;
                f.write_str(" => ")?;
                p.formula(f, r, 1)
            }),
            Formula::Forall(h, s, body) => self.fwrap(f, prec, 0, |p, f| {
                let x = p.pick(&[&h.0], body.free_vars()).remove(0);
                write!(f, "forall {x} : {s} . ")?;
                p.env.push(x);
                let r = p.formula(f, body, 0);
                p.env.pop();
                r
            }),
        }
    }

    fn fwrap(
        &mut self,
        f: &mut fmt::Formatter<'_>,
        required: u8,
        natural: u8,
        body: impl FnOnce(&mut Self, &mut fmt::Formatter<'_>) -> fmt::Result,
    ) -> fmt::Result {
        if natural < required {
            f.write_char('(')?;
            body(self, f)?;
            f.write_char(')')
        } else {
            body(self, f)
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer::new().term(f, self, P_LOW)
    }
}

impl fmt::Display for ATerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer::new().aterm(f, self, P_LOW)
    }
}

impl fmt::Display for AType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer::new().atype(f, self, P_LOW)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer::new().ty(f, self, P_LOW)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer::new().formula(f, self, 0)
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Nat => f.write_str("nat"),
            Sort::Var(i) => write!(f, "?{i}"),
            Sort::Arrow(a, b) => {
                if matches!(**a, Sort::Arrow(_, _)) {
                    write!(f, "({a}) -> {b}")
                } else {
                    write!(f, "{a} -> {b}")
                }
            }
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.sig().is_empty() {
            f.write_str("sigma: ")?;
            for (i, (x, s)) in self.sig().iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x} : {s}")?;
            }
            f.write_char('\n')?;
        }
        if !self.hyps().is_empty() {
            f.write_str("hyps: ")?;
            for (i, h) in self.hyps().iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{h}")?;
            }
            f.write_char('\n')?;
        }
        write!(f, "goal: {}", self.goal())
    }
}

impl fmt::Display for EvalContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hole = Term::Var(Var::Free("_".into()));
        write!(f, "{}", self.plug(&hole))
    }
}
