//! Abstract syntax for the five term languages that share one variable space:
//! implicit terms and types, annotated terms and types, and (elsewhere) the
//! target logic's formulas, which embed implicit terms.
//!
//! Binding uses a locally nameless representation: bound occurrences are
//! de Bruijn indices, free occurrences are names, and every binder keeps the
//! surface name as a printing hint that is ignored by equality. Alpha
//! equivalence is therefore plain structural equality (`==`), and
//! capture-avoiding substitution of locally closed terms never renames.
//!
//! A node that binds `n` variables stores its body with indices
//! `Bound(0) ..= Bound(n-1)` referring to its own binders, innermost binder
//! first. Complete values handed across the public API are locally closed;
//! scope bodies are opened with [`instantiate`]-style methods before being
//! inspected.

use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

pub type Name = String;

/// Surface name for a binder, kept only for printing. Compares equal to any
/// other hint so derived `PartialEq` on syntax is alpha equivalence.
#[derive(Clone, Debug)]
pub struct Hint(pub String);

impl Hint {
    pub fn new(s: impl Into<String>) -> Self {
        Hint(s.into())
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}
impl Eq for Hint {}
impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    Free(Name),
    Bound(u32),
}

/// The two-point effect lattice: `Total` (written `!`) is below `General`
/// (written `?`), and nothing else is related.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Effect {
    Total,
    General,
}

/// Implicit terms. These double as the terms of the target logic, which
/// simply never contains `Join`, `Terminates`, or `Contra`; that subset is
/// enforced at use sites.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    App(Box<Term>, Box<Term>),
    Lam(Hint, Box<Term>),
    Zero,
    Suc(Box<Term>),
    /// `rec f(x) = body`; binds f then x in the body (x innermost).
    Rec(Hint, Hint, Box<Term>),
    Case(Box<Term>, Box<Term>, Box<Term>),
    Join,
    Terminates,
    Contra,
    Abort,
}

/// Implicit types. `Pi` binds its variable in the codomain only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Type {
    Nat,
    Pi(Effect, Hint, Box<Type>, Box<Type>),
    Eq(Box<Term>, Box<Term>),
    Terminates(Box<Term>),
}

/// Annotated terms, carrying enough information for syntax-directed checking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ATerm {
    Var(Var),
    App(Box<ATerm>, Box<ATerm>),
    /// `\e x : S . a`; binds x in the body, not in S.
    Lam(Effect, Hint, Box<AType>, Box<ATerm>),
    Zero,
    Suc(Box<ATerm>),
    /// `recnat f (x, p) : S = a`. S binds x; the body binds f, x, p
    /// (p innermost). p may only appear where erasure deletes it.
    RecNat(Hint, Hint, Hint, Box<AType>, Box<ATerm>),
    /// `rec f (x : S') : S = a`. S binds x; the body binds f then x.
    Rec(Hint, Hint, Box<AType>, Box<AType>, Box<ATerm>),
    /// `case [x . S] a a' a''`; binds x in the motive S only.
    Case(Hint, Box<AType>, Box<ATerm>, Box<ATerm>, Box<ATerm>),
    Join(Box<ATerm>, Box<ATerm>),
    /// `conv [x . S] a by a'`: subject a, equality proof a'; binds x in S.
    Conv(Hint, Box<AType>, Box<ATerm>, Box<ATerm>),
    /// `reflect a by a'`: subject a, termination proof a'.
    Reflect(Box<ATerm>, Box<ATerm>),
    /// `tm a`: the reified termination witness for a.
    Terminates(Box<ATerm>),
    /// `inv a at a'`: a proves Terminates of some C[a'].
    Inv(Box<ATerm>, Box<ATerm>),
    Contra(Box<AType>, Box<ATerm>),
    Abort(Box<AType>),
}

/// Annotated types; mirrors [`Type`] with annotated indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AType {
    Nat,
    Pi(Effect, Hint, Box<AType>, Box<AType>),
    Eq(Box<ATerm>, Box<ATerm>),
    Terminates(Box<ATerm>),
}

/// Ordered typing context of annotated bindings. Well-formedness is a
/// judgment (see the typechecker), not a construction invariant.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    bindings: Vec<(Name, AType)>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    pub fn push(&mut self, name: impl Into<Name>, ty: AType) {
        self.bindings.push((name.into(), ty));
    }

    pub fn pop(&mut self) -> Option<(Name, AType)> {
        self.bindings.pop()
    }

    pub fn lookup(&self, name: &str) -> Option<&AType> {
        self.bindings
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Name, AType)> {
        self.bindings.iter()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn names(&self) -> BTreeSet<Name> {
        self.bindings.iter().map(|(n, _)| n.clone()).collect()
    }
}

impl FromIterator<(Name, AType)> for Context {
    fn from_iter<I: IntoIterator<Item = (Name, AType)>>(iter: I) -> Self {
        Context {
            bindings: iter.into_iter().collect(),
        }
    }
}

// --- traversal ---------------------------------------------------------
//
// Each `map` rebuilds the tree, handing every variable leaf to `f` together
// with the number of binders crossed; `f` returns Some(replacement) to
// substitute a whole term for the leaf. Each `visit` is the read-only
// counterpart.

impl Term {
    pub(crate) fn map<F: FnMut(u32, &Var) -> Option<Term>>(&self, d: u32, f: &mut F) -> Term {
        match self {
            Term::Var(v) => f(d, v).unwrap_or_else(|| Term::Var(v.clone())),
            Term::App(a, b) => Term::App(Box::new(a.map(d, f)), Box::new(b.map(d, f))),
            Term::Lam(h, b) => Term::Lam(h.clone(), Box::new(b.map(d + 1, f))),
            Term::Zero => Term::Zero,
            Term::Suc(t) => Term::Suc(Box::new(t.map(d, f))),
            Term::Rec(hf, hx, b) => Term::Rec(hf.clone(), hx.clone(), Box::new(b.map(d + 2, f))),
            Term::Case(s, z, sc) => Term::Case(
                Box::new(s.map(d, f)),
                Box::new(z.map(d, f)),
                Box::new(sc.map(d, f)),
            ),
            Term::Join => Term::Join,
            Term::Terminates => Term::Terminates,
            Term::Contra => Term::Contra,
            Term::Abort => Term::Abort,
        }
    }

    pub(crate) fn visit<F: FnMut(u32, &Var)>(&self, d: u32, f: &mut F) {
        match self {
            Term::Var(v) => f(d, v),
            Term::App(a, b) => {
                a.visit(d, f);
                b.visit(d, f);
            }
            Term::Lam(_, b) => b.visit(d + 1, f),
            Term::Suc(t) => t.visit(d, f),
            Term::Rec(_, _, b) => b.visit(d + 2, f),
            Term::Case(s, z, sc) => {
                s.visit(d, f);
                z.visit(d, f);
                sc.visit(d, f);
            }
            Term::Zero | Term::Join | Term::Terminates | Term::Contra | Term::Abort => {}
        }
    }
}

impl Type {
    fn map<F: FnMut(u32, &Var) -> Option<Term>>(&self, d: u32, f: &mut F) -> Type {
        match self {
            Type::Nat => Type::Nat,
            Type::Pi(e, h, dom, cod) => Type::Pi(
                *e,
                h.clone(),
                Box::new(dom.map(d, f)),
                Box::new(cod.map(d + 1, f)),
            ),
            Type::Eq(a, b) => Type::Eq(Box::new(a.map(d, f)), Box::new(b.map(d, f))),
            Type::Terminates(t) => Type::Terminates(Box::new(t.map(d, f))),
        }
    }

    fn visit<F: FnMut(u32, &Var)>(&self, d: u32, f: &mut F) {
        match self {
            Type::Nat => {}
            Type::Pi(_, _, dom, cod) => {
                dom.visit(d, f);
                cod.visit(d + 1, f);
            }
            Type::Eq(a, b) => {
                a.visit(d, f);
                b.visit(d, f);
            }
            Type::Terminates(t) => t.visit(d, f),
        }
    }
}

impl ATerm {
    fn map<F: FnMut(u32, &Var) -> Option<ATerm>>(&self, d: u32, f: &mut F) -> ATerm {
        match self {
            ATerm::Var(v) => f(d, v).unwrap_or_else(|| ATerm::Var(v.clone())),
            ATerm::App(a, b) => ATerm::App(Box::new(a.map(d, f)), Box::new(b.map(d, f))),
            ATerm::Lam(e, h, s, b) => ATerm::Lam(
                *e,
                h.clone(),
                Box::new(s.map(d, f)),
                Box::new(b.map(d + 1, f)),
            ),
            ATerm::Zero => ATerm::Zero,
            ATerm::Suc(a) => ATerm::Suc(Box::new(a.map(d, f))),
            ATerm::RecNat(hf, hx, hp, s, b) => ATerm::RecNat(
                hf.clone(),
                hx.clone(),
                hp.clone(),
                Box::new(s.map(d + 1, f)),
                Box::new(b.map(d + 3, f)),
            ),
            ATerm::Rec(hf, hx, s1, s2, b) => ATerm::Rec(
                hf.clone(),
                hx.clone(),
                Box::new(s1.map(d, f)),
                Box::new(s2.map(d + 1, f)),
                Box::new(b.map(d + 2, f)),
            ),
            ATerm::Case(h, s, scr, z, sc) => ATerm::Case(
                h.clone(),
                Box::new(s.map(d + 1, f)),
                Box::new(scr.map(d, f)),
                Box::new(z.map(d, f)),
                Box::new(sc.map(d, f)),
            ),
            ATerm::Join(a, b) => ATerm::Join(Box::new(a.map(d, f)), Box::new(b.map(d, f))),
            ATerm::Conv(h, s, a, pr) => ATerm::Conv(
                h.clone(),
                Box::new(s.map(d + 1, f)),
                Box::new(a.map(d, f)),
                Box::new(pr.map(d, f)),
            ),
            ATerm::Reflect(a, pr) => ATerm::Reflect(Box::new(a.map(d, f)), Box::new(pr.map(d, f))),
            ATerm::Terminates(a) => ATerm::Terminates(Box::new(a.map(d, f))),
            ATerm::Inv(a, b) => ATerm::Inv(Box::new(a.map(d, f)), Box::new(b.map(d, f))),
            ATerm::Contra(s, a) => ATerm::Contra(Box::new(s.map(d, f)), Box::new(a.map(d, f))),
            ATerm::Abort(s) => ATerm::Abort(Box::new(s.map(d, f))),
        }
    }

    fn visit<F: FnMut(u32, &Var)>(&self, d: u32, f: &mut F) {
        match self {
            ATerm::Var(v) => f(d, v),
            ATerm::App(a, b) | ATerm::Join(a, b) | ATerm::Reflect(a, b) | ATerm::Inv(a, b) => {
                a.visit(d, f);
                b.visit(d, f);
            }
            ATerm::Lam(_, _, s, b) => {
                s.visit(d, f);
                b.visit(d + 1, f);
            }
            ATerm::Zero => {}
            ATerm::Suc(a) => a.visit(d, f),
            ATerm::RecNat(_, _, _, s, b) => {
                s.visit(d + 1, f);
                b.visit(d + 3, f);
            }
            ATerm::Rec(_, _, s1, s2, b) => {
                s1.visit(d, f);
                s2.visit(d + 1, f);
                b.visit(d + 2, f);
            }
            ATerm::Case(_, s, scr, z, sc) => {
                s.visit(d + 1, f);
                scr.visit(d, f);
                z.visit(d, f);
                sc.visit(d, f);
            }
            ATerm::Conv(_, s, a, pr) => {
                s.visit(d + 1, f);
                a.visit(d, f);
                pr.visit(d, f);
            }
            ATerm::Terminates(a) => a.visit(d, f),
            ATerm::Contra(s, a) => {
                s.visit(d, f);
                a.visit(d, f);
            }
            ATerm::Abort(s) => s.visit(d, f),
        }
    }
}

impl AType {
    fn map<F: FnMut(u32, &Var) -> Option<ATerm>>(&self, d: u32, f: &mut F) -> AType {
        match self {
            AType::Nat => AType::Nat,
            AType::Pi(e, h, dom, cod) => AType::Pi(
                *e,
                h.clone(),
                Box::new(dom.map(d, f)),
                Box::new(cod.map(d + 1, f)),
            ),
            AType::Eq(a, b) => AType::Eq(Box::new(a.map(d, f)), Box::new(b.map(d, f))),
            AType::Terminates(a) => AType::Terminates(Box::new(a.map(d, f))),
        }
    }

    fn visit<F: FnMut(u32, &Var)>(&self, d: u32, f: &mut F) {
        match self {
            AType::Nat => {}
            AType::Pi(_, _, dom, cod) => {
                dom.visit(d, f);
                cod.visit(d + 1, f);
            }
            AType::Eq(a, b) => {
                a.visit(d, f);
                b.visit(d, f);
            }
            AType::Terminates(a) => a.visit(d, f),
        }
    }
}

// --- binding operations -------------------------------------------------

fn instantiate_var<T: Clone>(
    d: u32,
    v: &Var,
    reps: &[&T],
    mk_bound: impl Fn(u32) -> T,
) -> Option<T> {
    let n = reps.len() as u32;
    match v {
        Var::Bound(i) if *i >= d => {
            let j = i - d;
            Some(if j < n {
                reps[(n - 1 - j) as usize].clone()
            } else {
                mk_bound(i - n)
            })
        }
        _ => None,
    }
}

fn close_var<T>(
    d: u32,
    v: &Var,
    names: &[&str],
    n_binders: u32,
    mk: impl Fn(Var) -> T,
) -> Option<T> {
    match v {
        // The innermost binder of a duplicated name wins, as in shadowing.
        Var::Free(x) => names
            .iter()
            .rposition(|n| n == x)
            .map(|k| mk(Var::Bound(d + n_binders - 1 - k as u32))),
        Var::Bound(i) if *i >= d => Some(mk(Var::Bound(i + n_binders))),
        _ => None,
    }
}

macro_rules! binding_ops {
    ($ty:ident, $var:path) => {
        impl $ty {
            /// Replaces this scope body's outermost binders with the given
            /// terms, listed outermost binder first. Replacements must be
            /// locally closed.
            pub fn instantiate(&self, reps: &[&$ty]) -> $ty {
                self.map(0, &mut |d, v| {
                    instantiate_var(d, v, reps, |i| $var(Var::Bound(i)))
                })
            }

            /// Instantiates the outermost binders with free variables,
            /// listed outermost binder first.
            pub fn open(&self, names: &[&str]) -> $ty {
                let vars: Vec<$ty> = names
                    .iter()
                    .map(|n| $var(Var::Free((*n).to_string())))
                    .collect();
                let refs: Vec<&$ty> = vars.iter().collect();
                self.instantiate(&refs)
            }

            /// Turns the given free variables into the outermost binder
            /// indices (outermost binder first), producing a scope body.
            pub fn close(&self, names: &[&str]) -> $ty {
                let n = names.len() as u32;
                self.map(0, &mut |d, v| close_var(d, v, names, n, $var))
            }

            /// Capture-avoiding substitution of `v` for the free variable `x`.
            pub fn subst(&self, x: &str, v: &$ty) -> $ty {
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

            /// True when no bound index escapes its binders.
            pub fn is_locally_closed(&self) -> bool {
                let mut ok = true;
                self.visit(0, &mut |d, v| {
                    if let Var::Bound(i) = v {
                        if *i >= d {
                            ok = false;
                        }
                    }
                });
                ok
            }

            /// Alpha equivalence; with this representation it is `==`.
            pub fn alpha_eq(&self, other: &Self) -> bool {
                self == other
            }
        }
    };
}

binding_ops!(Term, Term::Var);
binding_ops!(ATerm, ATerm::Var);

// Types have no variable leaves of their own; their scopes are instantiated
// with terms of the matching term language.
macro_rules! type_binding_ops {
    ($ty:ident, $tm:ident, $var:path) => {
        impl $ty {
            /// Replaces the outermost term binders of this type scope,
            /// listed outermost binder first.
            pub fn instantiate(&self, reps: &[&$tm]) -> $ty {
                self.map(0, &mut |d, v| {
                    instantiate_var(d, v, reps, |i| $var(Var::Bound(i)))
                })
            }

            pub fn open(&self, names: &[&str]) -> $ty {
                let vars: Vec<$tm> = names
                    .iter()
                    .map(|n| $var(Var::Free((*n).to_string())))
                    .collect();
                let refs: Vec<&$tm> = vars.iter().collect();
                self.instantiate(&refs)
            }

            pub fn close(&self, names: &[&str]) -> $ty {
                let n = names.len() as u32;
                self.map(0, &mut |d, v| close_var(d, v, names, n, $var))
            }

            pub fn subst(&self, x: &str, v: &$tm) -> $ty {
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

            pub fn is_locally_closed(&self) -> bool {
                let mut ok = true;
                self.visit(0, &mut |d, v| {
                    if let Var::Bound(i) = v {
                        if *i >= d {
                            ok = false;
                        }
                    }
                });
                ok
            }

            pub fn alpha_eq(&self, other: &Self) -> bool {
                self == other
            }
        }
    };
}

type_binding_ops!(Type, Term, Term::Var);
type_binding_ops!(AType, ATerm, ATerm::Var);

// --- constructors used all over the tests and the frontend ---------------

pub fn fv(name: impl Into<String>) -> Term {
    Term::Var(Var::Free(name.into()))
}

pub fn afv(name: impl Into<String>) -> ATerm {
    ATerm::Var(Var::Free(name.into()))
}

pub fn app(f: Term, a: Term) -> Term {
    Term::App(Box::new(f), Box::new(a))
}

pub fn aapp(f: ATerm, a: ATerm) -> ATerm {
    ATerm::App(Box::new(f), Box::new(a))
}

/// `\name. body` built from a body that mentions `name` free.
pub fn lam(name: &str, body: Term) -> Term {
    Term::Lam(Hint::new(name), Box::new(body.close(&[name])))
}

/// `rec f(x) = body` built from a body with `f` and `x` free.
pub fn rec(f: &str, x: &str, body: Term) -> Term {
    Term::Rec(Hint::new(f), Hint::new(x), Box::new(body.close(&[f, x])))
}

pub fn alam(eff: Effect, name: &str, dom: AType, body: ATerm) -> ATerm {
    ATerm::Lam(
        eff,
        Hint::new(name),
        Box::new(dom),
        Box::new(body.close(&[name])),
    )
}

pub fn arec(f: &str, x: &str, dom: AType, cod: AType, body: ATerm) -> ATerm {
    ATerm::Rec(
        Hint::new(f),
        Hint::new(x),
        Box::new(dom),
        Box::new(cod.close(&[x])),
        Box::new(body.close(&[f, x])),
    )
}

pub fn arecnat(f: &str, x: &str, p: &str, ann: AType, body: ATerm) -> ATerm {
    ATerm::RecNat(
        Hint::new(f),
        Hint::new(x),
        Hint::new(p),
        Box::new(ann.close(&[x])),
        Box::new(body.close(&[f, x, p])),
    )
}

pub fn acase(x: &str, motive: AType, scrut: ATerm, z: ATerm, s: ATerm) -> ATerm {
    ATerm::Case(
        Hint::new(x),
        Box::new(motive.close(&[x])),
        Box::new(scrut),
        Box::new(z),
        Box::new(s),
    )
}

pub fn aconv(x: &str, pat: AType, subject: ATerm, proof: ATerm) -> ATerm {
    ATerm::Conv(
        Hint::new(x),
        Box::new(pat.close(&[x])),
        Box::new(subject),
        Box::new(proof),
    )
}

pub fn pi(eff: Effect, x: &str, dom: Type, cod: Type) -> Type {
    Type::Pi(eff, Hint::new(x), Box::new(dom), Box::new(cod.close(&[x])))
}

pub fn api(eff: Effect, x: &str, dom: AType, cod: AType) -> AType {
    AType::Pi(eff, Hint::new(x), Box::new(dom), Box::new(cod.close(&[x])))
}

pub fn aeq(l: ATerm, r: ATerm) -> AType {
    AType::Eq(Box::new(l), Box::new(r))
}

pub fn aterminates(a: ATerm) -> AType {
    AType::Terminates(Box::new(a))
}

/// Builds the unary numeral for `n`.
pub fn numeral(n: u64) -> Term {
    let mut t = Term::Zero;
    for _ in 0..n {
        t = Term::Suc(Box::new(t));
    }
    t
}

// --- annotation erasure ---------------------------------------------------

impl ATerm {
    /// Deletes all annotations: conv/reflect/inv erase to their subject,
    /// join/terminates/contra/abort to bare keywords, both recursion forms
    /// to `rec`.
    pub fn erase(&self) -> Term {
        match self {
            ATerm::Var(v) => Term::Var(v.clone()),
            ATerm::App(a, b) => app(a.erase(), b.erase()),
            ATerm::Lam(_, h, _, b) => Term::Lam(h.clone(), Box::new(b.erase())),
            ATerm::Zero => Term::Zero,
            ATerm::Suc(a) => Term::Suc(Box::new(a.erase())),
            ATerm::RecNat(hf, hx, _, _, b) => {
                // The body binds f, x, p; the erased rec binds only f, x. A
                // surviving p occurrence is impossible in checked terms and
                // is mapped to 0 to keep erasure total.
                Term::Rec(
                    hf.clone(),
                    hx.clone(),
                    Box::new(strip_innermost(&b.erase())),
                )
            }
            ATerm::Rec(hf, hx, _, _, b) => Term::Rec(hf.clone(), hx.clone(), Box::new(b.erase())),
            ATerm::Case(_, _, s, z, sc) => Term::Case(
                Box::new(s.erase()),
                Box::new(z.erase()),
                Box::new(sc.erase()),
            ),
            ATerm::Join(_, _) => Term::Join,
            ATerm::Conv(_, _, a, _) => a.erase(),
            ATerm::Reflect(a, _) => a.erase(),
            ATerm::Terminates(_) => Term::Terminates,
            ATerm::Inv(a, _) => a.erase(),
            ATerm::Contra(_, _) => Term::Contra,
            ATerm::Abort(_) => Term::Abort,
        }
    }
}

/// Removes the innermost binder slot of a scope body: occurrences of it
/// become 0, outer indices shift down by one.
fn strip_innermost(t: &Term) -> Term {
    t.map(0, &mut |d, v| match v {
        Var::Bound(i) if *i == d => Some(Term::Zero),
        Var::Bound(i) if *i > d => Some(Term::Var(Var::Bound(i - 1))),
        _ => None,
    })
}

impl AType {
    /// Homomorphic erasure through embedded terms.
    pub fn erase(&self) -> Type {
        match self {
            AType::Nat => Type::Nat,
            AType::Pi(e, h, dom, cod) => {
                Type::Pi(*e, h.clone(), Box::new(dom.erase()), Box::new(cod.erase()))
            }
            AType::Eq(a, b) => Type::Eq(Box::new(a.erase()), Box::new(b.erase())),
            AType::Terminates(a) => Type::Terminates(Box::new(a.erase())),
        }
    }
}

/// Picks a name based on `hint` that avoids everything in `avoid`, by
/// appending primes.
pub fn freshen(hint: &str, avoid: &BTreeSet<Name>) -> Name {
    let base = if hint.is_empty() { "x" } else { hint };
    let mut candidate = base.to_string();
    while avoid.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subst_variable_hit() {
        assert_eq!(fv("x").subst("x", &Term::Zero), Term::Zero);
    }

    #[test]
    fn subst_shadowing() {
        let t = lam("x", fv("x"));
        assert_eq!(t.subst("x", &Term::Zero), lam("x", fv("x")));
    }

    #[test]
    fn subst_capture_avoidance() {
        // [y/x](\y. x y) is alpha-equal to \y'. y y'.
        let t = lam("y", app(fv("x"), fv("y")));
        let got = t.subst("x", &fv("y"));
        let want = lam("w", app(fv("y"), fv("w")));
        assert!(got.alpha_eq(&want));
    }

    #[test]
    fn alpha_eq_binders() {
        assert!(lam("x", fv("x")).alpha_eq(&lam("y", fv("y"))));
        assert!(lam("x", fv("y")).alpha_eq(&lam("z", fv("y"))));
        assert!(!lam("x", fv("y")).alpha_eq(&lam("y", fv("y"))));
        let p1 = pi(
            Effect::Total,
            "x",
            Type::Nat,
            Type::Eq(Box::new(fv("x")), Box::new(Term::Zero)),
        );
        let p2 = pi(
            Effect::Total,
            "z",
            Type::Nat,
            Type::Eq(Box::new(fv("z")), Box::new(Term::Zero)),
        );
        assert!(p1.alpha_eq(&p2));
    }

    #[test]
    fn free_vars_examples() {
        let t = lam("x", app(fv("x"), fv("y")));
        assert_eq!(t.free_vars(), BTreeSet::from(["y".to_string()]));
        let r = rec("f", "x", app(fv("f"), fv("x")));
        assert!(r.free_vars().is_empty());
        let inv = ATerm::Inv(Box::new(afv("p")), Box::new(afv("q")));
        assert_eq!(
            inv.free_vars(),
            BTreeSet::from(["p".to_string(), "q".to_string()])
        );
    }

    #[test]
    fn free_vars_of_subst_bounded() {
        let t = lam("y", app(fv("x"), app(fv("y"), fv("z"))));
        let v = app(fv("u"), fv("z"));
        let got = t.subst("x", &v).free_vars();
        let mut bound: BTreeSet<Name> = t.free_vars();
        bound.remove("x");
        bound.extend(v.free_vars());
        assert!(got.is_subset(&bound));
    }

    #[test]
    fn subst_atype_examples() {
        let s = aeq(afv("x"), ATerm::Zero);
        let got = s.subst("x", &ATerm::Suc(Box::new(ATerm::Zero)));
        assert_eq!(got, aeq(ATerm::Suc(Box::new(ATerm::Zero)), ATerm::Zero));

        assert_eq!(AType::Nat.subst("x", &ATerm::Zero), AType::Nat);

        let p = api(Effect::Total, "y", AType::Nat, aeq(afv("x"), afv("y")));
        let got = p.subst("x", &ATerm::Zero);
        let want = api(Effect::Total, "y", AType::Nat, aeq(ATerm::Zero, afv("y")));
        assert!(got.alpha_eq(&want));
    }

    #[test]
    fn erase_conv_to_subject() {
        let a = aconv("x", aeq(afv("x"), ATerm::Zero), afv("a"), afv("prf"));
        assert_eq!(a.erase(), fv("a"));
    }

    #[test]
    fn erase_recnat_drops_p() {
        // recnat f (x, p) : nat = reflect (f x) by (p x) erases to
        // rec f(x) = f x; the p annotation vanishes with the reflect proof.
        let body = ATerm::Reflect(
            Box::new(aapp(afv("f"), afv("x"))),
            Box::new(aapp(afv("p"), afv("x"))),
        );
        let r = arecnat("f", "x", "p", AType::Nat, body);
        assert_eq!(r.erase(), rec("f", "x", app(fv("f"), fv("x"))));
    }

    #[test]
    fn erase_join_to_keyword() {
        let a = ATerm::Join(Box::new(afv("a")), Box::new(afv("b")));
        assert_eq!(a.erase(), Term::Join);
    }

    #[test]
    fn erase_type_examples() {
        assert_eq!(AType::Nat.erase(), Type::Nat);
        let s = aterminates(aconv("x", AType::Nat, afv("a"), afv("pf")));
        assert_eq!(s.erase(), Type::Terminates(Box::new(fv("a"))));
        let e = aeq(
            ATerm::Join(Box::new(afv("a")), Box::new(afv("b"))),
            ATerm::Zero,
        );
        assert_eq!(
            e.erase(),
            Type::Eq(Box::new(Term::Join), Box::new(Term::Zero))
        );
    }

    #[test]
    fn erase_output_locally_closed() {
        let body = acase(
            "y",
            AType::Nat,
            afv("x"),
            ATerm::Zero,
            alam(Effect::Total, "w", AType::Nat, afv("w")),
        );
        let t = arecnat("f", "x", "p", AType::Nat, body);
        assert!(t.erase().is_locally_closed());
    }

    #[test]
    fn open_close_round_trip() {
        let body = app(fv("f"), app(fv("x"), fv("y")));
        let scope = body.close(&["f", "x"]);
        assert_eq!(scope.open(&["f", "x"]), body);
    }

    #[test]
    fn close_duplicate_names_bind_innermost() {
        // rec f(f) = f: the body variable refers to the argument binder.
        let r = rec("f", "f", fv("f"));
        let want = Term::Rec(
            Hint::new("f"),
            Hint::new("f"),
            Box::new(Term::Var(Var::Bound(0))),
        );
        assert_eq!(r, want);
    }

    #[test]
    fn erasure_commutes_with_subst_spot() {
        let a = aapp(
            alam(Effect::General, "y", AType::Nat, aapp(afv("x"), afv("y"))),
            afv("x"),
        );
        let v = ATerm::Suc(Box::new(ATerm::Zero));
        let lhs = a.subst("x", &v).erase();
        let rhs = a.erase().subst("x", &v.erase());
        assert_eq!(lhs, rhs);
    }
}
