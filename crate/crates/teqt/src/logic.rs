//! The target logic: a multi-sorted intuitionistic first-order theory of
//! general-recursive functions.
//!
//! This module holds the data model (sorts, formulas, sequents), the
//! computational and logical translations from the source language, and a
//! simple-sort checker for the logic's terms. Terms of the logic reuse
//! [`Term`], restricted to the subset without `join`, `terminates`, and
//! `contra`; equations need not be well sorted.

use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::{app, freshen, fv, Context, Effect, Hint, Name, Term, Type, Var};

/// Simple sorts. `Var` is solver-internal and never appears in answers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sort {
    Nat,
    Arrow(Box<Sort>, Box<Sort>),
    Var(u32),
}

pub fn arrow(a: Sort, b: Sort) -> Sort {
    Sort::Arrow(Box::new(a), Box::new(b))
}

/// Formulas over logic terms. `Forall` binds a term variable in its body,
/// with the same locally nameless convention as the term languages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    True,
    Forall(Hint, Sort, Box<Formula>),
    Imp(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Terminates(Box<Term>),
    Eq(Box<Term>, Box<Term>),
}

impl Formula {
    fn map<F: FnMut(u32, &Var) -> Option<Term>>(&self, d: u32, f: &mut F) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::Forall(h, s, body) => {
                Formula::Forall(h.clone(), s.clone(), Box::new(body.map(d + 1, f)))
            }
            Formula::Imp(a, b) => Formula::Imp(Box::new(a.map(d, f)), Box::new(b.map(d, f))),
            Formula::And(a, b) => Formula::And(Box::new(a.map(d, f)), Box::new(b.map(d, f))),
            Formula::Terminates(t) => Formula::Terminates(Box::new(t.map(d, f))),
            Formula::Eq(a, b) => Formula::Eq(Box::new(a.map(d, f)), Box::new(b.map(d, f))),
        }
    }

    fn visit<F: FnMut(u32, &Var)>(&self, d: u32, f: &mut F) {
        match self {
            Formula::True => {}
            Formula::Forall(_, _, body) => body.visit(d + 1, f),
            Formula::Imp(a, b) | Formula::And(a, b) => {
                a.visit(d, f);
                b.visit(d, f);
            }
            Formula::Terminates(t) => t.visit(d, f),
            Formula::Eq(a, b) => {
                a.visit(d, f);
                b.visit(d, f);
            }
        }
    }

    /// Replaces this scope body's outermost binders, outermost first.
    pub fn instantiate(&self, reps: &[&Term]) -> Formula {
        let n = reps.len() as u32;
        self.map(0, &mut |d, v| match v {
            Var::Bound(i) if *i >= d => {
                let j = i - d;
                Some(if j < n {
                    reps[(n - 1 - j) as usize].clone()
                } else {
                    Term::Var(Var::Bound(i - n))
                })
            }
            _ => None,
        })
    }

    pub fn open(&self, names: &[&str]) -> Formula {
        let vars: Vec<Term> = names.iter().map(|n| fv(*n)).collect();
        let refs: Vec<&Term> = vars.iter().collect();
        self.instantiate(&refs)
    }

    pub fn close(&self, names: &[&str]) -> Formula {
        let n = names.len() as u32;
        self.map(0, &mut |d, v| match v {
            Var::Free(x) => names
                .iter()
                .rposition(|nm| nm == x)
                .map(|k| Term::Var(Var::Bound(d + n - 1 - k as u32))),
            Var::Bound(i) if *i >= d => Some(Term::Var(Var::Bound(i + n))),
            _ => None,
        })
    }

    /// Capture-avoiding substitution of `v` for the free variable `x` in the
    /// embedded terms.
    pub fn subst(&self, x: &str, v: &Term) -> Formula {
        self.map(0, &mut |_, var| match var {
            Var::Free(n) if n == x => Some(v.clone()),
            _ => None,
        })
    }

    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit(0, &mut |_, v| {
            if let Var::Free(n) = v {
                out.insert(n.clone());
            }
        });
        out
    }

    pub fn alpha_eq(&self, other: &Self) -> bool {
        self == other
    }
}

/// A judgment of the logic: sort context, hypothesis list, goal. Free
/// variables of the hypotheses and goal must be declared in the sort
/// context; this is checked on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequent {
    sig: Vec<(Name, Sort)>,
    hyps: Vec<Formula>,
    goal: Formula,
}

#[derive(Clone, Debug)]
pub struct SequentError(pub String);

impl fmt::Display for SequentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ill-formed sequent: {}", self.0)
    }
}

impl std::error::Error for SequentError {}

impl Sequent {
    pub fn new(
        sig: Vec<(Name, Sort)>,
        hyps: Vec<Formula>,
        goal: Formula,
    ) -> Result<Self, SequentError> {
        let declared: BTreeSet<&Name> = sig.iter().map(|(n, _)| n).collect();
        for f in hyps.iter().chain(std::iter::once(&goal)) {
            for v in f.free_vars() {
                if !declared.contains(&v) {
                    return Err(SequentError(format!(
                        "free variable {v} is not declared in the sort context"
                    )));
                }
            }
        }
        Ok(Sequent { sig, hyps, goal })
    }

    pub fn sig(&self) -> &[(Name, Sort)] {
        &self.sig
    }

    pub fn hyps(&self) -> &[Formula] {
        &self.hyps
    }

    pub fn goal(&self) -> &Formula {
        &self.goal
    }
}

// --- computational translation ---------------------------------------------

/// Maps the logical constants join, terminates, and contra to 0; everything
/// else is homomorphic. The output lies in the logic's term subset.
pub fn trans_term_c(t: &Term) -> Term {
    match t {
        Term::Var(v) => Term::Var(v.clone()),
        Term::App(a, b) => app(trans_term_c(a), trans_term_c(b)),
        Term::Lam(h, b) => Term::Lam(h.clone(), Box::new(trans_term_c(b))),
        Term::Zero => Term::Zero,
        Term::Suc(a) => Term::Suc(Box::new(trans_term_c(a))),
        Term::Rec(hf, hx, b) => Term::Rec(hf.clone(), hx.clone(), Box::new(trans_term_c(b))),
        Term::Case(s, z, sc) => Term::Case(
            Box::new(trans_term_c(s)),
            Box::new(trans_term_c(z)),
            Box::new(trans_term_c(sc)),
        ),
        Term::Join | Term::Terminates | Term::Contra => Term::Zero,
        Term::Abort => Term::Abort,
    }
}

/// Sort of a type: Pi becomes an arrow (effect and dependency discarded),
/// the two propositions become nat.
pub fn trans_type_c(ty: &Type) -> Sort {
    match ty {
        Type::Nat => Sort::Nat,
        Type::Pi(_, _, dom, cod) => arrow(trans_type_c(dom), trans_type_c(cod)),
        Type::Eq(_, _) | Type::Terminates(_) => Sort::Nat,
    }
}

/// The behavioral predicate of a type, applied to the logic term `w`.
/// Quantified names reuse the Pi binder's surface name, freshened against
/// the free variables of `w` and of the type's embedded terms.
pub fn trans_type_l(ty: &Type, w: &Term) -> Formula {
    match ty {
        Type::Nat => Formula::True,
        Type::Pi(eff, hint, dom, cod) => {
            let mut avoid = w.free_vars();
            avoid.extend(ty.free_vars());
            let x = freshen(&hint.0, &avoid);
            let hyp = trans_type_l_eff(dom, Effect::Total, &fv(x.clone()));
            let concl = trans_type_l_eff(&cod.open(&[&x]), *eff, &app(w.clone(), fv(x.clone())));
            Formula::Forall(
                Hint::new(x.clone()),
                trans_type_c(dom),
                Box::new(Formula::Imp(Box::new(hyp), Box::new(concl)).close(&[&x])),
            )
        }
        Type::Eq(l, r) => Formula::Eq(Box::new(trans_term_c(l)), Box::new(trans_term_c(r))),
        Type::Terminates(t) => Formula::Terminates(Box::new(trans_term_c(t))),
    }
}

/// The effect-indexed form: conjunction with termination for the total
/// effect, implication from termination for the general one.
pub fn trans_type_l_eff(ty: &Type, eff: Effect, w: &Term) -> Formula {
    let term = Formula::Terminates(Box::new(w.clone()));
    let prop = trans_type_l(ty, w);
    match eff {
        Effect::Total => Formula::And(Box::new(term), Box::new(prop)),
        Effect::General => Formula::Imp(Box::new(term), Box::new(prop)),
    }
}

/// Translates a typing context into a sort context plus one hypothesis per
/// binding, asserting that the variable terminates and has its type's
/// behavioral property.
pub fn trans_ctx(ctx: &Context) -> (Vec<(Name, Sort)>, Vec<Formula>) {
    let mut sig = Vec::new();
    let mut hyps = Vec::new();
    for (name, aty) in ctx.iter() {
        let ty = aty.erase();
        sig.push((name.clone(), trans_type_c(&ty)));
        hyps.push(trans_type_l_eff(&ty, Effect::Total, &fv(name.clone())));
    }
    (sig, hyps)
}

/// The proof obligation for an accepted judgment: the translated context
/// entails the effect-indexed property of the translated term.
pub fn make_obligation(ctx: &Context, t: &Term, ty: &Type, eff: Effect) -> Sequent {
    let (sig, hyps) = trans_ctx(ctx);
    let goal = trans_type_l_eff(ty, eff, &trans_term_c(t));
    Sequent::new(sig, hyps, goal).expect("translated contexts declare every variable")
}

// --- simple-sort checking ---------------------------------------------------

/// Why a sort check failed.
#[derive(Clone, Debug)]
pub enum SortError {
    /// The named variable is not declared.
    Unbound(Name),
    /// The term contains join, terminates, or contra.
    OutsideFragment(&'static str),
    /// Two sorts failed to unify (printed after resolving solved variables).
    Mismatch(Sort, Sort),
}

impl fmt::Display for SortError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SortError::Unbound(x) => write!(f, "variable {x} has no declared sort"),
            SortError::OutsideFragment(k) => {
                write!(f, "term constant {k} does not exist in the logic")
            }
            SortError::Mismatch(a, b) => write!(f, "cannot unify sort {a} with {b}"),
        }
    }
}

impl std::error::Error for SortError {}

struct SortSolver {
    solutions: Vec<Option<Sort>>,
}

impl SortSolver {
    fn new() -> Self {
        SortSolver {
            solutions: Vec::new(),
        }
    }

    fn fresh(&mut self) -> Sort {
        self.solutions.push(None);
        Sort::Var(self.solutions.len() as u32 - 1)
    }

    /// Chases solved variables at the root.
    fn shallow(&self, s: &Sort) -> Sort {
        let mut cur = s.clone();
        while let Sort::Var(i) = cur {
            match &self.solutions[i as usize] {
                Some(next) => cur = next.clone(),
                None => break,
            }
        }
        cur
    }

    fn resolve(&self, s: &Sort) -> Sort {
        match self.shallow(s) {
            Sort::Arrow(a, b) => arrow(self.resolve(&a), self.resolve(&b)),
            other => other,
        }
    }

    fn occurs(&self, v: u32, s: &Sort) -> bool {
        match self.shallow(s) {
            Sort::Var(i) => i == v,
            Sort::Arrow(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
            Sort::Nat => false,
        }
    }

    fn unify(&mut self, a: &Sort, b: &Sort) -> Result<(), SortError> {
        let (a, b) = (self.shallow(a), self.shallow(b));
        match (&a, &b) {
            (Sort::Var(i), Sort::Var(j)) if i == j => Ok(()),
            (Sort::Var(i), other) | (other, Sort::Var(i)) => {
                if self.occurs(*i, other) {
                    return Err(SortError::Mismatch(self.resolve(&a), self.resolve(&b)));
                }
                self.solutions[*i as usize] = Some(other.clone());
                Ok(())
            }
            (Sort::Nat, Sort::Nat) => Ok(()),
            (Sort::Arrow(a1, a2), Sort::Arrow(b1, b2)) => {
                self.unify(a1, b1)?;
                self.unify(a2, b2)
            }
            _ => Err(SortError::Mismatch(self.resolve(&a), self.resolve(&b))),
        }
    }

    fn check(
        &mut self,
        sig: &[(Name, Sort)],
        stack: &mut Vec<Sort>,
        t: &Term,
        expected: &Sort,
    ) -> Result<(), SortError> {
        match t {
            Term::Var(Var::Free(x)) => {
                let found = sig
                    .iter()
                    .rev()
                    .find(|(n, _)| n == x)
                    .map(|(_, s)| s.clone())
                    .ok_or_else(|| SortError::Unbound(x.clone()))?;
                self.unify(&found, expected)
            }
            Term::Var(Var::Bound(i)) => {
                let found = (stack.len() as u32)
                    .checked_sub(i + 1)
                    .and_then(|idx| stack.get(idx as usize).cloned())
                    .ok_or_else(|| SortError::Unbound(format!("_b{i}")))?;
                self.unify(&found, expected)
            }
            Term::Zero => self.unify(&Sort::Nat, expected),
            Term::Suc(a) => {
                self.unify(&Sort::Nat, expected)?;
                self.check(sig, stack, a, &Sort::Nat)
            }
            Term::Lam(_, body) => {
                let dom = self.fresh();
                let cod = self.fresh();
                self.unify(expected, &arrow(dom.clone(), cod.clone()))?;
                stack.push(dom);
                let r = self.check(sig, stack, body, &cod);
                stack.pop();
                r
            }
            Term::App(f, a) => {
                let dom = self.fresh();
                self.check(sig, stack, f, &arrow(dom.clone(), expected.clone()))?;
                self.check(sig, stack, a, &dom)
            }
            Term::Rec(_, _, body) => {
                let dom = self.fresh();
                let cod = self.fresh();
                let fun = arrow(dom.clone(), cod.clone());
                self.unify(expected, &fun)?;
                stack.push(fun);
                stack.push(dom);
                let r = self.check(sig, stack, body, &cod);
                stack.pop();
                stack.pop();
                r
            }
            Term::Case(s, z, sc) => {
                self.check(sig, stack, s, &Sort::Nat)?;
                self.check(sig, stack, z, expected)?;
                self.check(sig, stack, sc, &arrow(Sort::Nat, expected.clone()))
            }
            Term::Abort => Ok(()),
            Term::Join => Err(SortError::OutsideFragment("join")),
            Term::Terminates => Err(SortError::OutsideFragment("terminates")),
            Term::Contra => Err(SortError::OutsideFragment("contra")),
        }
    }
}

/// Checks `t` against `expected` in the sort context `sig` by constraint
/// generation and first-order unification. Lambda binders, abort, and
/// application arguments receive fresh sort variables.
pub fn sty_check(sig: &[(Name, Sort)], t: &Term, expected: &Sort) -> Result<(), SortError> {
    let mut solver = SortSolver::new();
    let mut stack = Vec::new();
    solver.check(sig, &mut stack, t, expected)
}
