//! Call-by-value small-step reduction for implicit terms.
//!
//! The step relation is deterministic: a non-value term decomposes uniquely
//! into an evaluation context around either a root beta-redex or `abort`,
//! and `abort` in a non-trivial context collapses the whole term.

use crate::syntax::Term;

/// One-hole evaluation contexts. `AppR`'s left component is a value by
/// construction of [`decompose`]; `plug` does not re-check it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalContext {
    Hole,
    Suc(Box<EvalContext>),
    AppL(Box<EvalContext>, Term),
    AppR(Term, Box<EvalContext>),
    Case(Box<EvalContext>, Term, Term),
}

impl EvalContext {
    pub fn plug(&self, t: &Term) -> Term {
        match self {
            EvalContext::Hole => t.clone(),
            EvalContext::Suc(c) => Term::Suc(Box::new(c.plug(t))),
            EvalContext::AppL(c, arg) => Term::App(Box::new(c.plug(t)), Box::new(arg.clone())),
            EvalContext::AppR(f, c) => Term::App(Box::new(f.clone()), Box::new(c.plug(t))),
            EvalContext::Case(c, z, s) => Term::Case(
                Box::new(c.plug(t)),
                Box::new(z.clone()),
                Box::new(s.clone()),
            ),
        }
    }

    /// True for the grammar of contexts: every `AppR` left part is a value.
    pub fn is_well_formed(&self) -> bool {
        match self {
            EvalContext::Hole => true,
            EvalContext::Suc(c) | EvalContext::AppL(c, _) | EvalContext::Case(c, _, _) => {
                c.is_well_formed()
            }
            EvalContext::AppR(f, c) => is_value(f) && c.is_well_formed(),
        }
    }
}

/// Values: variables, numerals, functions, and the primitive proof terms.
/// `abort` is not a value.
pub fn is_value(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Zero | Term::Lam(_, _) | Term::Rec(_, _, _) => true,
        Term::Suc(inner) => is_value(inner),
        Term::Join | Term::Terminates | Term::Contra => true,
        _ => false,
    }
}

/// The root beta step, defined only when the redex is fully applied to
/// values. Recursive application substitutes both the argument and the
/// whole rec-term.
pub fn beta(t: &Term) -> Option<Term> {
    match t {
        Term::App(f, arg) if is_value(arg) => match &**f {
            Term::Lam(_, body) => Some(body.instantiate(&[arg])),
            Term::Rec(_, _, body) => Some(body.instantiate(&[f, arg])),
            _ => None,
        },
        Term::Case(scrut, z, s) => match &**scrut {
            Term::Zero => Some((**z).clone()),
            Term::Suc(v) if is_value(v) => Some(Term::App(s.clone(), v.clone())),
            _ => None,
        },
        _ => None,
    }
}

/// Unique CBV decomposition of a non-value into a context around a root
/// redex or `abort`. Values and stuck terms have none.
pub fn decompose(t: &Term) -> Option<(EvalContext, Term)> {
    if is_value(t) {
        return None;
    }
    if matches!(t, Term::Abort) {
        return Some((EvalContext::Hole, Term::Abort));
    }
    if beta(t).is_some() {
        return Some((EvalContext::Hole, t.clone()));
    }
    match t {
        Term::Suc(inner) => {
            let (c, r) = decompose(inner)?;
            Some((EvalContext::Suc(Box::new(c)), r))
        }
        Term::App(f, arg) => {
            if !is_value(f) {
                let (c, r) = decompose(f)?;
                Some((EvalContext::AppL(Box::new(c), (**arg).clone()), r))
            } else if !is_value(arg) {
                let (c, r) = decompose(arg)?;
                Some((EvalContext::AppR((**f).clone(), Box::new(c)), r))
            } else {
                None
            }
        }
        Term::Case(scrut, z, s) => {
            if is_value(scrut) {
                None
            } else {
                let (c, r) = decompose(scrut)?;
                Some((
                    EvalContext::Case(Box::new(c), (**z).clone(), (**s).clone()),
                    r,
                ))
            }
        }
        _ => None,
    }
}

/// One small step. `abort` under a non-trivial context collapses to `abort`;
/// `abort` itself does not step.
pub fn step(t: &Term) -> Option<Term> {
    let (ctx, redex) = decompose(t)?;
    if matches!(redex, Term::Abort) {
        if matches!(ctx, EvalContext::Hole) {
            None
        } else {
            Some(Term::Abort)
        }
    } else {
        Some(ctx.plug(&beta(&redex)?))
    }
}

/// A reduction trace: the input followed by every successor, at most `fuel`
/// steps long.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    terms: Vec<Term>,
}

impl Trace {
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn last(&self) -> &Term {
        self.terms.last().expect("trace is never empty")
    }

    pub fn steps(&self) -> usize {
        self.terms.len() - 1
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.terms.iter().any(|u| u.alpha_eq(t))
    }

    /// True when the trace ended because nothing steps, rather than because
    /// fuel ran out.
    pub fn finished(&self) -> bool {
        step(self.last()).is_none()
    }
}

pub fn reduce_trace(t: &Term, fuel: usize) -> Trace {
    let mut terms = Vec::with_capacity(fuel.min(64) + 1);
    terms.push(t.clone());
    for _ in 0..fuel {
        match step(terms.last().unwrap()) {
            Some(next) => terms.push(next),
            None => break,
        }
    }
    Trace { terms }
}

/// True when the two traces of length at most `fuel` share a term up to
/// alpha. Reflexive at any fuel, symmetric, and monotone in `fuel`.
pub fn joinable(t1: &Term, t2: &Term, fuel: usize) -> bool {
    use std::collections::HashSet;
    let tr1 = reduce_trace(t1, fuel);
    let seen: HashSet<&Term> = tr1.terms().iter().collect();
    let tr2 = reduce_trace(t2, fuel);
    tr2.terms().iter().any(|u| seen.contains(u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{app, fv, lam, numeral, rec, Term};

    fn omega_app() -> Term {
        // (rec f(x) = f x) 0 unfolds to itself forever.
        app(rec("f", "x", app(fv("f"), fv("x"))), Term::Zero)
    }

    #[test]
    fn value_examples() {
        assert!(is_value(&numeral(2)));
        assert!(!is_value(&Term::Abort));
        assert!(!is_value(&app(lam("x", fv("x")), Term::Zero)));
        assert!(!is_value(&Term::Suc(Box::new(Term::Abort))));
    }

    #[test]
    fn beta_app_abs() {
        assert_eq!(beta(&app(lam("x", fv("x")), Term::Zero)), Some(Term::Zero));
    }

    #[test]
    fn beta_case_suc_applies_branch() {
        let t = Term::Case(
            Box::new(numeral(1)),
            Box::new(fv("t")),
            Box::new(lam("y", fv("y"))),
        );
        assert_eq!(beta(&t), Some(app(lam("y", fv("y")), Term::Zero)));
    }

    #[test]
    fn beta_app_rec_unfolds_to_itself() {
        let t = omega_app();
        assert_eq!(beta(&t), Some(t.clone()));
    }

    #[test]
    fn decompose_examples() {
        let inner = app(lam("x", fv("x")), Term::Zero);
        let t = Term::Suc(Box::new(inner.clone()));
        let (c, r) = decompose(&t).unwrap();
        assert_eq!(c, EvalContext::Suc(Box::new(EvalContext::Hole)));
        assert_eq!(r, inner);

        let t = app(inner.clone(), Term::Zero);
        let (c, r) = decompose(&t).unwrap();
        assert_eq!(
            c,
            EvalContext::AppL(Box::new(EvalContext::Hole), Term::Zero)
        );
        assert_eq!(r, inner);

        assert_eq!(decompose(&Term::Zero), None);
    }

    #[test]
    fn plug_decompose_identity() {
        let t = app(
            lam("x", fv("x")),
            Term::Suc(Box::new(app(lam("y", fv("y")), Term::Zero))),
        );
        let (c, r) = decompose(&t).unwrap();
        assert_eq!(c.plug(&r), t);
    }

    #[test]
    fn step_abort_in_context() {
        assert_eq!(step(&Term::Suc(Box::new(Term::Abort))), Some(Term::Abort));
        assert_eq!(step(&Term::Abort), None);
    }

    #[test]
    fn step_case_zero() {
        let t = Term::Case(
            Box::new(Term::Zero),
            Box::new(Term::Zero),
            Box::new(lam("y", fv("y"))),
        );
        assert_eq!(step(&t), Some(Term::Zero));
    }

    #[test]
    fn values_do_not_step() {
        assert_eq!(step(&lam("x", fv("x"))), None);
        assert_eq!(step(&numeral(3)), None);
    }

    #[test]
    fn trace_of_value_is_singleton() {
        let tr = reduce_trace(&Term::Zero, 10);
        assert_eq!(tr.terms(), &[Term::Zero]);
        assert!(tr.finished());
    }

    #[test]
    fn trace_of_loop_hits_fuel() {
        let t = omega_app();
        let tr = reduce_trace(&t, 3);
        assert_eq!(tr.terms().len(), 4);
        assert!(tr.terms().iter().all(|u| u == &t));
        assert!(!tr.finished());
    }

    #[test]
    fn joinable_reflexive_at_zero_fuel() {
        let t = app(fv("f"), Term::Zero);
        assert!(joinable(&t, &t, 0));
    }

    #[test]
    fn joinable_loop_never_reaches_zero() {
        let t = omega_app();
        for fuel in [0, 1, 5, 50] {
            assert!(!joinable(&t, &Term::Zero, fuel));
        }
    }
}
