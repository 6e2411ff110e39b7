//! The syntax-directed checker for annotated terms.
//!
//! The judgment takes a context, an annotated term, and an effect as inputs
//! and produces the type as output. Checking is deterministic: exactly one
//! rule applies per term constructor, and subeffecting exists only where a
//! rule carries an explicit latent-effect premise. Type equality everywhere
//! is alpha equivalence of annotated syntax; conversion is always explicit
//! in the term.

use std::fmt;

use crate::eval::{is_value, joinable, EvalContext};
use crate::syntax::{aapp, afv, api, aterminates, ATerm, AType, Context, Effect, Name, Term, Var};

/// Knobs for checking. `join_fuel` is the reduction bound used by the
/// equality introduction rule.
#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub join_fuel: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { join_fuel: 1000 }
    }
}

/// A check failure: the rule whose premise broke, a description of that one
/// premise, and the path of the offending sub-term from the root.
#[derive(Clone, Debug)]
pub struct Diagnostic {
    pub rule: &'static str,
    pub message: String,
    pub path: Vec<&'static str>,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.message)?;
        if !self.path.is_empty() {
            write!(f, " (at {})", self.path.join("/"))?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostic {}

/// The subeffect relation: reflexivity plus Total <= General.
pub fn subeffect(lo: Effect, hi: Effect) -> bool {
    lo == hi || (lo == Effect::Total && hi == Effect::General)
}

/// Searches for an evaluation context C with plug(C, sub) alpha-equal to
/// `big`. The hole is tried first, then Suc, then the function position,
/// then the argument position (only under a value), then the scrutinee.
pub fn find_eval_position(big: &Term, sub: &Term) -> Option<EvalContext> {
    if big.alpha_eq(sub) {
        return Some(EvalContext::Hole);
    }
    match big {
        Term::Suc(inner) => find_eval_position(inner, sub).map(|c| EvalContext::Suc(Box::new(c))),
        Term::App(f, arg) => find_eval_position(f, sub)
            .map(|c| EvalContext::AppL(Box::new(c), (**arg).clone()))
            .or_else(|| {
                if is_value(f) {
                    find_eval_position(arg, sub)
                        .map(|c| EvalContext::AppR((**f).clone(), Box::new(c)))
                } else {
                    None
                }
            }),
        Term::Case(scrut, z, s) => find_eval_position(scrut, sub)
            .map(|c| EvalContext::Case(Box::new(c), (**z).clone(), (**s).clone())),
        _ => None,
    }
}

/// Context well-formedness: every binding's type is well formed in its
/// prefix. Reports the first bad binding.
pub fn wf_context(ctx: &Context, cfg: &CheckConfig) -> Result<(), Diagnostic> {
    let mut chk = Checker::new(cfg);
    for (name, ty) in ctx.iter() {
        chk.wf_type(ty).map_err(|mut d| {
            d.message = format!("binding {}: {}", name, d.message);
            d
        })?;
        chk.ctx.push(name.clone(), ty.clone());
    }
    Ok(())
}

/// Type well-formedness under a context assumed well formed.
pub fn wf_type(ctx: &Context, ty: &AType, cfg: &CheckConfig) -> Result<(), Diagnostic> {
    Checker::with_ctx(cfg, ctx.clone()).wf_type(ty)
}

/// Infers the type of `a` at effect `eff` under a context assumed well
/// formed.
pub fn infer(
    ctx: &Context,
    a: &ATerm,
    eff: Effect,
    cfg: &CheckConfig,
) -> Result<AType, Diagnostic> {
    Checker::with_ctx(cfg, ctx.clone()).infer(a, eff)
}

struct Checker<'c> {
    cfg: &'c CheckConfig,
    ctx: Context,
    path: Vec<&'static str>,
    fresh: u64,
}

impl<'c> Checker<'c> {
    fn new(cfg: &'c CheckConfig) -> Self {
        Checker {
            cfg,
            ctx: Context::new(),
            path: Vec::new(),
            fresh: 0,
        }
    }

    fn with_ctx(cfg: &'c CheckConfig, ctx: Context) -> Self {
        Checker {
            cfg,
            ctx,
            path: Vec::new(),
            fresh: 0,
        }
    }

    /// Fresh names contain `#`, which the surface syntax cannot produce, so
    /// they never collide with program variables.
    fn fresh_name(&mut self, hint: &str) -> Name {
        let base = hint.split('#').next().unwrap_or("x");
        let base = if base.is_empty() { "x" } else { base };
        let n = self.fresh;
        self.fresh += 1;
        format!("{base}#{n}")
    }

    fn fail<T>(&self, rule: &'static str, message: String) -> Result<T, Diagnostic> {
        Err(Diagnostic {
            rule,
            message,
            path: self.path.clone(),
        })
    }

    fn enter<T>(
        &mut self,
        label: &'static str,
        f: impl FnOnce(&mut Self) -> Result<T, Diagnostic>,
    ) -> Result<T, Diagnostic> {
        self.path.push(label);
        let r = f(self);
        self.path.pop();
        r
    }

    fn wf_type(&mut self, ty: &AType) -> Result<(), Diagnostic> {
        match ty {
            AType::Nat => Ok(()),
            AType::Pi(_, hint, dom, cod) => {
                self.enter("domain", |c| c.wf_type(dom))?;
                let x = self.fresh_name(&hint.0);
                self.ctx.push(x.clone(), (**dom).clone());
                let r = self.enter("codomain", |c| c.wf_type(&cod.open(&[&x])));
                self.pop();
                r
            }
            AType::Eq(l, r) => {
                self.enter("left", |c| c.infer(l, Effect::General))?;
                self.enter("right", |c| c.infer(r, Effect::General))?;
                Ok(())
            }
            AType::Terminates(a) => {
                self.enter("subject", |c| c.infer(a, Effect::General))?;
                Ok(())
            }
        }
    }

    fn pop(&mut self) {
        self.ctx.pop();
    }

    fn infer(&mut self, a: &ATerm, eff: Effect) -> Result<AType, Diagnostic> {
        match a {
            ATerm::Var(Var::Free(x)) => match self.ctx.lookup(x) {
                Some(ty) => Ok(ty.clone()),
                None => self.fail("A_Var", format!("variable {x} is not in scope")),
            },
            ATerm::Var(Var::Bound(i)) => self.fail("A_Var", format!("dangling bound variable {i}")),
            ATerm::Zero => Ok(AType::Nat),
            ATerm::Suc(inner) => {
                let ty = self.enter("subject", |c| c.infer(inner, eff))?;
                if ty != AType::Nat {
                    return self.fail("A_Suc", format!("expected nat, found {ty}"));
                }
                Ok(AType::Nat)
            }
            ATerm::Lam(rho, hint, dom, body) => {
                self.enter("domain", |c| c.wf_type(dom))?;
                let x = self.fresh_name(&hint.0);
                self.ctx.push(x.clone(), (**dom).clone());
                let result = (|| {
                    let body_ty = self.enter("body", |c| c.infer(&body.open(&[&x]), *rho))?;
                    self.enter("codomain", |c| c.wf_type(&body_ty))?;
                    Ok(body_ty)
                })();
                self.pop();
                let body_ty = result?;
                Ok(AType::Pi(
                    *rho,
                    hint.clone(),
                    dom.clone(),
                    Box::new(body_ty.close(&[&x])),
                ))
            }
            ATerm::App(f, arg) => {
                let fun_ty = self.enter("fun", |c| c.infer(f, eff))?;
                let AType::Pi(rho, _, dom, cod) = fun_ty else {
                    return self.fail(
                        "A_App",
                        format!("applied term has type {fun_ty}, not a Pi type"),
                    );
                };
                if !subeffect(rho, eff) {
                    return self.fail(
                        "A_App",
                        format!("latent effect {rho} is not below ambient effect {eff}"),
                    );
                }
                let arg_ty = self.enter("arg", |c| c.infer(arg, eff))?;
                if arg_ty != *dom {
                    return self.fail(
                        "A_App",
                        format!("argument type mismatch: expected {dom}, found {arg_ty}"),
                    );
                }
                Ok(cod.instantiate(&[arg]))
            }
            ATerm::Join(l, r) => {
                if !joinable(&l.erase(), &r.erase(), self.cfg.join_fuel) {
                    return self.fail(
                        "A_Join",
                        format!(
                            "sides do not reach a common reduct within {} steps",
                            self.cfg.join_fuel
                        ),
                    );
                }
                self.enter("left", |c| c.infer(l, Effect::General))?;
                self.enter("right", |c| c.infer(r, Effect::General))?;
                Ok(AType::Eq(l.clone(), r.clone()))
            }
            ATerm::Conv(_, pat, subject, proof) => {
                let proof_ty = self.enter("proof", |c| c.infer(proof, Effect::Total))?;
                let AType::Eq(a1, a2) = proof_ty else {
                    return self.fail(
                        "A_Conv",
                        format!("conversion proof has type {proof_ty}, not an equality"),
                    );
                };
                let subj_ty = self.enter("subject", |c| c.infer(subject, eff))?;
                let expected = pat.instantiate(&[&a2]);
                if subj_ty != expected {
                    return self.fail(
                        "A_Conv",
                        format!("subject type mismatch: expected {expected}, found {subj_ty}"),
                    );
                }
                let result = pat.instantiate(&[&a1]);
                self.enter("result", |c| c.wf_type(&result))?;
                Ok(result)
            }
            ATerm::Reflect(subject, proof) => {
                let subj_ty = self.enter("subject", |c| c.infer(subject, Effect::General))?;
                let proof_ty = self.enter("proof", |c| c.infer(proof, Effect::Total))?;
                let expected = aterminates((**subject).clone());
                if proof_ty != expected {
                    return self.fail(
                        "A_Reflect",
                        format!("termination proof has type {proof_ty}, expected {expected}"),
                    );
                }
                Ok(subj_ty)
            }
            ATerm::Terminates(subject) => {
                self.enter("subject", |c| c.infer(subject, Effect::Total))?;
                Ok(aterminates((**subject).clone()))
            }
            ATerm::Inv(proof, sub) => {
                let proof_ty = self.enter("proof", |c| c.infer(proof, eff))?;
                let AType::Terminates(big) = proof_ty else {
                    return self.fail(
                        "A_CtxTerm",
                        format!("inversion subject has type {proof_ty}, not Term"),
                    );
                };
                if find_eval_position(&big.erase(), &sub.erase()).is_none() {
                    return self.fail(
                        "A_CtxTerm",
                        "extracted term does not sit in an evaluation position of the terminating term"
                            .to_string(),
                    );
                }
                Ok(aterminates((**sub).clone()))
            }
            ATerm::Rec(hf, hx, dom, cod, body) => {
                self.enter("domain", |c| c.wf_type(dom))?;
                let x0 = self.fresh_name(&hx.0);
                self.ctx.push(x0.clone(), (**dom).clone());
                let wf = self.enter("annotation", |c| c.wf_type(&cod.open(&[&x0])));
                self.pop();
                wf?;
                let f_ty = AType::Pi(Effect::General, hx.clone(), dom.clone(), cod.clone());
                let f = self.fresh_name(&hf.0);
                let x = self.fresh_name(&hx.0);
                self.ctx.push(f.clone(), f_ty.clone());
                self.ctx.push(x.clone(), (**dom).clone());
                let result =
                    self.enter("body", |c| c.infer(&body.open(&[&f, &x]), Effect::General));
                self.pop();
                self.pop();
                let body_ty = result?;
                let expected = cod.open(&[&x]);
                if body_ty != expected {
                    return self.fail(
                        "A_Rec",
                        format!("body type mismatch: expected {expected}, found {body_ty}"),
                    );
                }
                Ok(f_ty)
            }
            ATerm::RecNat(hf, hx, hp, ann, body) => {
                let x0 = self.fresh_name(&hx.0);
                self.ctx.push(x0.clone(), AType::Nat);
                let wf = self.enter("annotation", |c| c.wf_type(&ann.open(&[&x0])));
                self.pop();
                wf?;
                let f = self.fresh_name(&hf.0);
                let x = self.fresh_name(&hx.0);
                let p = self.fresh_name(&hp.0);
                let body_open = body.open(&[&f, &x, &p]);
                // The termination assumption may appear only where erasure
                // deletes it.
                if body_open.erase().free_vars().contains(&p) {
                    return self.fail(
                        "A_RecNat",
                        format!(
                            "termination assumption {} occurs in the erasure of the body",
                            hp.0
                        ),
                    );
                }
                let f_ty = AType::Pi(
                    Effect::General,
                    hx.clone(),
                    Box::new(AType::Nat),
                    ann.clone(),
                );
                let p_ty = api(
                    Effect::Total,
                    "x1",
                    AType::Nat,
                    api(
                        Effect::Total,
                        "p'",
                        AType::Eq(
                            Box::new(afv(x.clone())),
                            Box::new(ATerm::Suc(Box::new(afv("x1")))),
                        ),
                        aterminates(aapp(afv(f.clone()), afv("x1"))),
                    ),
                );
                self.ctx.push(f.clone(), f_ty);
                self.ctx.push(x.clone(), AType::Nat);
                self.ctx.push(p.clone(), p_ty);
                let result = self.enter("body", |c| c.infer(&body_open, Effect::Total));
                self.pop();
                self.pop();
                self.pop();
                let body_ty = result?;
                let expected = ann.open(&[&x]);
                if body_ty != expected {
                    return self.fail(
                        "A_RecNat",
                        format!("body type mismatch: expected {expected}, found {body_ty}"),
                    );
                }
                Ok(AType::Pi(
                    Effect::Total,
                    hx.clone(),
                    Box::new(AType::Nat),
                    ann.clone(),
                ))
            }
            ATerm::Case(_, motive, scrut, zbr, sbr) => {
                let scrut_ty = self.enter("scrutinee", |c| c.infer(scrut, eff))?;
                if scrut_ty != AType::Nat {
                    return self.fail(
                        "A_Case",
                        format!("scrutinee has type {scrut_ty}, expected nat"),
                    );
                }
                let z_ty = self.enter("zero-branch", |c| c.infer(zbr, eff))?;
                let z_expected = motive.instantiate(&[&ATerm::Zero]);
                if z_ty != z_expected {
                    return self.fail(
                        "A_Case",
                        format!("zero branch has type {z_ty}, expected {z_expected}"),
                    );
                }
                let s_ty = self.enter("suc-branch", |c| c.infer(sbr, eff))?;
                let AType::Pi(rho, h2, dom2, cod2) = s_ty else {
                    return self.fail(
                        "A_Case",
                        format!("suc branch has type {s_ty}, not a Pi type"),
                    );
                };
                if *dom2 != AType::Nat {
                    return self.fail(
                        "A_Case",
                        format!("suc branch domain is {dom2}, expected nat"),
                    );
                }
                if !subeffect(rho, eff) {
                    return self.fail(
                        "A_Case",
                        format!("suc branch latent effect {rho} is not below {eff}"),
                    );
                }
                let x1 = self.fresh_name(&h2.0);
                let got = cod2.open(&[&x1]);
                let expected = motive.instantiate(&[&ATerm::Suc(Box::new(afv(x1.clone())))]);
                if got != expected {
                    return self.fail(
                        "A_Case",
                        format!("suc branch codomain is {got}, expected {expected}"),
                    );
                }
                Ok(motive.instantiate(&[scrut]))
            }
            ATerm::Contra(ann, proof) => {
                let proof_ty = self.enter("proof", |c| c.infer(proof, Effect::Total))?;
                let ok = matches!(
                    &proof_ty,
                    AType::Eq(l, r) if **l == ATerm::Zero && matches!(**r, ATerm::Suc(_))
                );
                if !ok {
                    return self.fail(
                        "A_Contra",
                        format!("proof has type {proof_ty}, expected 0 = Suc a"),
                    );
                }
                self.enter("annotation", |c| c.wf_type(ann))?;
                Ok((**ann).clone())
            }
            ATerm::Abort(ann) => {
                if eff != Effect::General {
                    return self.fail(
                        "A_Abort",
                        "abort is only well typed at the general effect".to_string(),
                    );
                }
                Ok((**ann).clone())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{aapp, acase, afv, alam, api, arecnat, Effect::*};

    fn cfg() -> CheckConfig {
        CheckConfig::default()
    }

    #[test]
    fn subeffect_table() {
        assert!(subeffect(Total, General));
        assert!(subeffect(General, General));
        assert!(subeffect(Total, Total));
        assert!(!subeffect(General, Total));
    }

    #[test]
    fn wf_context_examples() {
        assert!(wf_context(&Context::new(), &cfg()).is_ok());

        let mut ctx = Context::new();
        ctx.push("x", AType::Nat);
        assert!(wf_context(&ctx, &cfg()).is_ok());

        // An equation whose side applies 0 to 0 fails the application rule.
        let mut ctx = Context::new();
        ctx.push(
            "x",
            AType::Eq(
                Box::new(ATerm::Zero),
                Box::new(aapp(ATerm::Zero, ATerm::Zero)),
            ),
        );
        let err = wf_context(&ctx, &cfg()).unwrap_err();
        assert_eq!(err.rule, "A_App");
    }

    #[test]
    fn wf_type_examples() {
        let ctx = Context::new();
        assert!(wf_type(&ctx, &AType::Nat, &cfg()).is_ok());
        assert!(wf_type(&ctx, &api(Total, "x", AType::Nat, AType::Nat), &cfg()).is_ok());
        // Term (abort nat) is fine: abort types at ? with any annotation.
        let t = aterminates(ATerm::Abort(Box::new(AType::Nat)));
        assert!(wf_type(&ctx, &t, &cfg()).is_ok());
    }

    #[test]
    fn infer_zero() {
        let got = infer(&Context::new(), &ATerm::Zero, General, &cfg()).unwrap();
        assert_eq!(got, AType::Nat);
    }

    #[test]
    fn abort_rejected_at_total() {
        let err = infer(
            &Context::new(),
            &ATerm::Abort(Box::new(AType::Nat)),
            Total,
            &cfg(),
        )
        .unwrap_err();
        assert_eq!(err.rule, "A_Abort");
    }

    #[test]
    fn lambda_identity() {
        let t = alam(Total, "x", AType::Nat, afv("x"));
        let got = infer(&Context::new(), &t, Total, &cfg()).unwrap();
        assert!(got.alpha_eq(&api(Total, "x", AType::Nat, AType::Nat)));
    }

    #[test]
    fn recnat_rejects_computational_p() {
        // recnat f (x, p) : nat = p x (join x x): p survives erasure.
        let body = aapp(
            aapp(afv("p"), afv("x")),
            ATerm::Join(Box::new(afv("x")), Box::new(afv("x"))),
        );
        let t = arecnat("f", "x", "p", AType::Nat, body);
        let err = infer(&Context::new(), &t, Total, &cfg()).unwrap_err();
        assert_eq!(err.rule, "A_RecNat");
    }

    #[test]
    fn reflect_under_recnat_assumption() {
        // With f, x', q, p as in the internal-verification addition example,
        // reflect (f x') by (p x' q) : nat at the total effect.
        let mut ctx = Context::new();
        ctx.push("x1", AType::Nat);
        ctx.push("x2", AType::Nat);
        ctx.push("f", api(General, "x", AType::Nat, AType::Nat));
        ctx.push(
            "p",
            api(
                Total,
                "x'",
                AType::Nat,
                api(
                    Total,
                    "q",
                    AType::Eq(
                        Box::new(afv("x1")),
                        Box::new(ATerm::Suc(Box::new(afv("x'")))),
                    ),
                    aterminates(aapp(afv("f"), afv("x'"))),
                ),
            ),
        );
        ctx.push("x'", AType::Nat);
        ctx.push(
            "q",
            AType::Eq(
                Box::new(afv("x1")),
                Box::new(ATerm::Suc(Box::new(afv("x'")))),
            ),
        );
        assert!(wf_context(&ctx, &cfg()).is_ok());
        let t = ATerm::Reflect(
            Box::new(aapp(afv("f"), afv("x'"))),
            Box::new(aapp(aapp(afv("p"), afv("x'")), afv("q"))),
        );
        let got = infer(&ctx, &t, Total, &cfg()).unwrap();
        assert_eq!(got, AType::Nat);
    }

    #[test]
    fn inversion_extracts_active_subterm() {
        // From t : Term (g x), conclude Term x: x sits in the argument
        // position of a value.
        let mut ctx = Context::new();
        ctx.push("x", AType::Nat);
        ctx.push("g", api(General, "w", AType::Nat, AType::Nat));
        ctx.push("t", aterminates(aapp(afv("g"), afv("x"))));
        assert!(wf_context(&ctx, &cfg()).is_ok());
        let inv = ATerm::Inv(Box::new(afv("t")), Box::new(afv("x")));
        let got = infer(&ctx, &inv, Total, &cfg()).unwrap();
        assert_eq!(got, aterminates(afv("x")));

        // A term that is not in an evaluation position is rejected.
        let bad = ATerm::Inv(Box::new(afv("t")), Box::new(ATerm::Zero));
        let err = infer(&ctx, &bad, Total, &cfg()).unwrap_err();
        assert_eq!(err.rule, "A_CtxTerm");
    }

    #[test]
    fn type_equality_is_annotated_syntax() {
        // tm (reflect a by p) : Term (reflect a by p), which is not
        // alpha-equal to Term a; matching the bare type requires an
        // explicit conv along join a (reflect a by p).
        let mut ctx = Context::new();
        ctx.push("g", api(General, "x", AType::Nat, AType::Nat));
        ctx.push("t", aterminates(aapp(afv("g"), ATerm::Zero)));
        ctx.push(
            "h",
            api(
                Total,
                "w",
                aterminates(aapp(afv("g"), ATerm::Zero)),
                AType::Nat,
            ),
        );
        assert!(wf_context(&ctx, &cfg()).is_ok());
        let cast = ATerm::Reflect(Box::new(aapp(afv("g"), ATerm::Zero)), Box::new(afv("t")));
        let witness = ATerm::Terminates(Box::new(cast.clone()));
        let direct = aapp(afv("h"), witness.clone());
        let err = infer(&ctx, &direct, Total, &cfg()).unwrap_err();
        assert_eq!(err.rule, "A_App");

        let routed = aapp(
            afv("h"),
            crate::syntax::aconv(
                "y",
                aterminates(afv("y")),
                witness,
                ATerm::Join(Box::new(aapp(afv("g"), ATerm::Zero)), Box::new(cast)),
            ),
        );
        let got = infer(&ctx, &routed, Total, &cfg()).unwrap();
        assert_eq!(got, AType::Nat);
    }

    #[test]
    fn case_allows_total_branch_at_general() {
        // rho = ! on the suc branch is fine when the ambient effect is ?.
        let t = acase(
            "y",
            AType::Nat,
            afv("n"),
            ATerm::Zero,
            alam(Total, "w", AType::Nat, afv("w")),
        );
        let mut ctx = Context::new();
        ctx.push("n", AType::Nat);
        let got = infer(&ctx, &t, General, &cfg()).unwrap();
        assert_eq!(got, AType::Nat);
    }

    #[test]
    fn find_eval_position_examples() {
        use crate::syntax::{app, fv, lam};
        let t = fv("t");
        assert_eq!(find_eval_position(&t, &t), Some(EvalContext::Hole));

        let sub = app(fv("f"), Term::Zero);
        let big = app(lam("x", fv("x")), sub.clone());
        match find_eval_position(&big, &sub) {
            Some(EvalContext::AppR(_, c)) => assert_eq!(*c, EvalContext::Hole),
            other => panic!("expected AppR, got {other:?}"),
        }

        let e = fv("e");
        let big = Term::Suc(Box::new(Term::Case(
            Box::new(e.clone()),
            Box::new(fv("a")),
            Box::new(fv("b")),
        )));
        let c = find_eval_position(&big, &e).unwrap();
        assert_eq!(c.plug(&e), big);
    }
}
