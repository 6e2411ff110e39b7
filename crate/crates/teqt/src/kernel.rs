//! LCF-style checker for derivations in the target logic.
//!
//! A proof is a tree with one constructor per rule, carrying explicit
//! witnesses wherever a rule's conclusion is not determined by its premises.
//! Checking is goal-directed: introduction forms and the axioms whose
//! conclusions are underdetermined (implication introduction, the
//! termination axioms for functions, ex falso rules, and the operational
//! axiom) consume the goal, while elimination forms synthesize their
//! conclusion, which is then compared with the goal up to alpha.

use std::fmt;

use crate::eval::{reduce_trace, EvalContext};
use crate::logic::{arrow, sty_check, Formula, Sequent, Sort};
use crate::syntax::{app, fv, Hint, Name, Term};
use crate::typecheck::CheckConfig;

/// A formula with a distinguished free variable standing for the hole of a
/// substitution pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaPattern {
    pub hole: Name,
    pub formula: Formula,
}

impl FormulaPattern {
    pub fn new(hole: impl Into<Name>, formula: Formula) -> Self {
        FormulaPattern {
            hole: hole.into(),
            formula,
        }
    }

    pub fn apply(&self, t: &Term) -> Formula {
        self.formula.subst(&self.hole, t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Proof {
    /// The i-th hypothesis, counted from the front of the list.
    Assume(usize),
    Alli(Name, Sort, Box<Proof>),
    Alle(Box<Proof>, Term),
    Impi(Box<Proof>),
    Impe(Box<Proof>, Box<Proof>),
    Andi(Box<Proof>, Box<Proof>),
    Ande1(Box<Proof>),
    Ande2(Box<Proof>),
    Truei,
    /// Anything from a proof of 0 = Suc t.
    Contra(Box<Proof>),
    /// Induction over nat on the pattern's hole; `step_var` names the
    /// predecessor in the step premise.
    Ind {
        pattern: FormulaPattern,
        base: Box<Proof>,
        step_var: Name,
        step: Box<Proof>,
    },
    /// Induction on the structure of a terminating computation of
    /// `rec f(x) = body : dom -> cod`, on the pattern's hole.
    CompInd {
        pattern: FormulaPattern,
        f: Name,
        x: Name,
        body: Term,
        dom: Sort,
        cod: Sort,
        premise: Box<Proof>,
    },
    Term0,
    TermS(Box<Proof>),
    TermAbs,
    TermRec,
    /// From Terminates of the plugged context, Terminates of the focus.
    TermInv(EvalContext, Box<Proof>),
    NotTermAbort(Box<Proof>),
    /// Goal t = t' where t reaches t' within the given number of steps.
    OpSem(usize),
    /// From eq : t = t' and body : [t/hole]F, conclude [t'/hole]F.
    Subst {
        pattern: FormulaPattern,
        eq: Box<Proof>,
        body: Box<Proof>,
    },
}

#[derive(Clone, Debug)]
pub struct ProofError {
    pub rule: &'static str,
    pub message: String,
}

impl fmt::Display for ProofError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.message)
    }
}

impl std::error::Error for ProofError {}

fn err<T>(rule: &'static str, message: impl Into<String>) -> Result<T, ProofError> {
    Err(ProofError {
        rule,
        message: message.into(),
    })
}

/// Checks `proof` against the sequent. Total: proofs are finite and the
/// operational axiom is fuel-bounded (the proof's own step count, capped by
/// the configured fuel).
pub fn check_proof(seq: &Sequent, proof: &Proof, cfg: &CheckConfig) -> Result<(), ProofError> {
    let mut k = Kernel {
        fuel_cap: cfg.join_fuel,
        sig: seq.sig().to_vec(),
        hyps: seq.hyps().to_vec(),
    };
    k.check(seq.goal(), proof)
}

struct Kernel {
    fuel_cap: usize,
    sig: Vec<(Name, Sort)>,
    hyps: Vec<Formula>,
}

impl Kernel {
    fn declared(&self, x: &str) -> bool {
        self.sig.iter().any(|(n, _)| n == x)
    }

    fn fresh_for_binding(&self, rule: &'static str, x: &str) -> Result<(), ProofError> {
        if self.declared(x) {
            return err(rule, format!("{x} is already declared in the sort context"));
        }
        if self.hyps.iter().any(|h| h.free_vars().contains(x)) {
            return err(rule, format!("{x} occurs free in the hypotheses"));
        }
        Ok(())
    }

    fn check(&mut self, goal: &Formula, p: &Proof) -> Result<(), ProofError> {
        match p {
            Proof::Impi(q) => {
                let Formula::Imp(hyp, concl) = goal else {
                    return err("Pv_Impi", format!("goal {goal} is not an implication"));
                };
                self.hyps.push((**hyp).clone());
                let r = self.check(concl, q);
                self.hyps.pop();
                r
            }
            Proof::Alli(x, sort, q) => {
                let Formula::Forall(_, goal_sort, scope) = goal else {
                    return err("Pv_Alli", format!("goal {goal} is not universal"));
                };
                if sort != goal_sort {
                    return err(
                        "Pv_Alli",
                        format!("annotated sort {sort} differs from the goal's {goal_sort}"),
                    );
                }
                self.fresh_for_binding("Pv_Alli", x)?;
                self.sig.push((x.clone(), sort.clone()));
                let r = self.check(&scope.open(&[x]), q);
                self.sig.pop();
                r
            }
            Proof::Andi(q, r) => {
                let Formula::And(a, b) = goal else {
                    return err("Pv_Andi", format!("goal {goal} is not a conjunction"));
                };
                self.check(a, q)?;
                self.check(b, r)
            }
            Proof::Truei => {
                if goal == &Formula::True {
                    Ok(())
                } else {
                    err("Pv_Truei", format!("goal {goal} is not True"))
                }
            }
            Proof::Term0 => match goal {
                Formula::Terminates(t) if **t == Term::Zero => Ok(()),
                _ => err("Pv_Term0", format!("goal {goal} is not Term 0")),
            },
            Proof::TermS(q) => match goal {
                Formula::Terminates(t) => match &**t {
                    Term::Suc(inner) => self.check(&Formula::Terminates(inner.clone()), q),
                    _ => err("Pv_TermS", format!("goal {goal} is not Term (Suc t)")),
                },
                _ => err(
                    "Pv_TermS",
                    format!("goal {goal} is not a termination claim"),
                ),
            },
            Proof::TermAbs => match goal {
                Formula::Terminates(t) if matches!(**t, Term::Lam(_, _)) => Ok(()),
                _ => err("Pv_TermAbs", format!("goal {goal} is not Term of a lambda")),
            },
            Proof::TermRec => match goal {
                Formula::Terminates(t) if matches!(**t, Term::Rec(_, _, _)) => Ok(()),
                _ => err("Pv_TermRec", format!("goal {goal} is not Term of a rec")),
            },
            Proof::TermInv(ctx, q) => {
                let Formula::Terminates(t) = goal else {
                    return err(
                        "Pv_TermInv",
                        format!("goal {goal} is not a termination claim"),
                    );
                };
                if !ctx.is_well_formed() {
                    return err(
                        "Pv_TermInv",
                        "context witness has a non-value left of an argument hole".to_string(),
                    );
                }
                let plugged = Formula::Terminates(Box::new(ctx.plug(t)));
                // Validate the witness against a synthesized premise when the
                // sub-proof determines one; fall back to goal-directed
                // checking otherwise.
                match self.synth(q)? {
                    Some(premise) => {
                        if premise.alpha_eq(&plugged) {
                            Ok(())
                        } else {
                            err(
                                "Pv_TermInv",
                                format!(
                                    "premise proves {premise}, but the context witness requires {plugged}"
                                ),
                            )
                        }
                    }
                    None => self.check(&plugged, q),
                }
            }
            Proof::Contra(q) => {
                let premise = self.synth_required(q)?;
                match &premise {
                    Formula::Eq(l, r) if **l == Term::Zero && matches!(**r, Term::Suc(_)) => Ok(()),
                    _ => err(
                        "Pv_Contra",
                        format!("premise {premise} is not of the form 0 = Suc t"),
                    ),
                }
            }
            Proof::NotTermAbort(q) => self.check(&Formula::Terminates(Box::new(Term::Abort)), q),
            Proof::OpSem(fuel) => {
                let Formula::Eq(l, r) = goal else {
                    return err("Pv_OpSem", format!("goal {goal} is not an equation"));
                };
                let trace = reduce_trace(l, (*fuel).min(self.fuel_cap));
                if trace.contains(r) {
                    Ok(())
                } else {
                    err(
                        "Pv_OpSem",
                        format!("{l} does not reach {r} within {fuel} steps"),
                    )
                }
            }
            Proof::Subst { .. } | Proof::Ind { .. } | Proof::CompInd { .. } => {
                let concl = self.synth_required(p)?;
                self.match_goal(rule_name(p), goal, &concl)
            }
            Proof::Assume(_)
            | Proof::Alle(_, _)
            | Proof::Impe(_, _)
            | Proof::Ande1(_)
            | Proof::Ande2(_) => {
                let concl = self.synth_required(p)?;
                self.match_goal(rule_name(p), goal, &concl)
            }
        }
    }

    fn match_goal(
        &self,
        rule: &'static str,
        goal: &Formula,
        concl: &Formula,
    ) -> Result<(), ProofError> {
        if goal.alpha_eq(concl) {
            Ok(())
        } else {
            err(rule, format!("proves {concl}, but the goal is {goal}"))
        }
    }

    fn synth_required(&mut self, p: &Proof) -> Result<Formula, ProofError> {
        match self.synth(p)? {
            Some(f) => Ok(f),
            None => err(rule_name(p), NOT_SYNTH.to_string()),
        }
    }

    /// Synthesizes the conclusion when the proof form determines one;
    /// `Ok(None)` means the form only checks against a known goal.
    fn synth(&mut self, p: &Proof) -> Result<Option<Formula>, ProofError> {
        match p {
            Proof::Assume(i) => match self.hyps.get(*i) {
                Some(f) => Ok(Some(f.clone())),
                None => err(
                    "Pv_Assume",
                    format!(
                        "hypothesis index {i} out of range (there are {})",
                        self.hyps.len()
                    ),
                ),
            },
            Proof::Alle(q, witness) => {
                let major = self.synth_required(q)?;
                let Formula::Forall(_, sort, scope) = major else {
                    return err("Pv_Alle", format!("premise {major} is not universal"));
                };
                sty_check(&self.sig, witness, &sort).map_err(|e| ProofError {
                    rule: "Pv_Alle",
                    message: format!("witness {witness} fails sort checking: {e}"),
                })?;
                Ok(Some(scope.instantiate(&[witness])))
            }
            Proof::Impe(q, r) => {
                let major = self.synth_required(q)?;
                let Formula::Imp(hyp, concl) = major else {
                    return err("Pv_Impe", format!("premise {major} is not an implication"));
                };
                self.check(&hyp, r)?;
                Ok(Some(*concl))
            }
            Proof::Ande1(q) => match self.synth_required(q)? {
                Formula::And(a, _) => Ok(Some(*a)),
                other => err("Pv_Ande1", format!("premise {other} is not a conjunction")),
            },
            Proof::Ande2(q) => match self.synth_required(q)? {
                Formula::And(_, b) => Ok(Some(*b)),
                other => err("Pv_Ande2", format!("premise {other} is not a conjunction")),
            },
            Proof::Andi(q, r) => {
                let a = self.synth_required(q)?;
                let b = self.synth_required(r)?;
                Ok(Some(Formula::And(Box::new(a), Box::new(b))))
            }
            Proof::Alli(x, sort, q) => {
                self.fresh_for_binding("Pv_Alli", x)?;
                self.sig.push((x.clone(), sort.clone()));
                let body = self.synth_required(q);
                self.sig.pop();
                let body = body?;
                Ok(Some(Formula::Forall(
                    Hint::new(x.clone()),
                    sort.clone(),
                    Box::new(body.close(&[x])),
                )))
            }
            Proof::Truei => Ok(Some(Formula::True)),
            Proof::Term0 => Ok(Some(Formula::Terminates(Box::new(Term::Zero)))),
            Proof::TermS(q) => match self.synth_required(q)? {
                Formula::Terminates(t) => Ok(Some(Formula::Terminates(Box::new(Term::Suc(t))))),
                other => err(
                    "Pv_TermS",
                    format!("premise {other} is not a termination claim"),
                ),
            },
            Proof::TermInv(ctx, q) => {
                if !ctx.is_well_formed() {
                    return err(
                        "Pv_TermInv",
                        "context witness has a non-value left of an argument hole".to_string(),
                    );
                }
                let premise = self.synth_required(q)?;
                let Formula::Terminates(big) = premise else {
                    return err(
                        "Pv_TermInv",
                        format!("premise {premise} is not a termination claim"),
                    );
                };
                match unplug(ctx, &big) {
                    Some(t) => Ok(Some(Formula::Terminates(Box::new(t)))),
                    None => err(
                        "Pv_TermInv",
                        format!("context witness does not match the premise term {big}"),
                    ),
                }
            }
            Proof::Subst { pattern, eq, body } => {
                let eq_f = self.synth_required(eq)?;
                let Formula::Eq(t, t2) = eq_f else {
                    return err(
                        "Pv_Subst",
                        format!("equality premise {eq_f} is not an equation"),
                    );
                };
                self.check(&pattern.apply(&t), body)?;
                Ok(Some(pattern.apply(&t2)))
            }
            Proof::Ind {
                pattern,
                base,
                step_var,
                step,
            } => {
                self.check(&pattern.apply(&Term::Zero), base)?;
                self.fresh_for_binding("Pv_Ind", step_var)?;
                self.sig.push((step_var.clone(), Sort::Nat));
                self.hyps
                    .push(Formula::Terminates(Box::new(fv(step_var.clone()))));
                self.hyps.push(pattern.apply(&fv(step_var.clone())));
                let r = self.check(
                    &pattern.apply(&Term::Suc(Box::new(fv(step_var.clone())))),
                    step,
                );
                self.hyps.pop();
                self.hyps.pop();
                self.sig.pop();
                r?;
                let x = &pattern.hole;
                let body = Formula::Imp(
                    Box::new(Formula::Terminates(Box::new(fv(x.clone())))),
                    Box::new(pattern.formula.clone()),
                );
                Ok(Some(Formula::Forall(
                    Hint::new(x.clone()),
                    Sort::Nat,
                    Box::new(body.close(&[x])),
                )))
            }
            Proof::CompInd {
                pattern,
                f,
                x,
                body,
                dom,
                cod,
                premise,
            } => {
                let rec_term = Term::Rec(
                    Hint::new(f.clone()),
                    Hint::new(x.clone()),
                    Box::new(body.close(&[f, x])),
                );
                let fun_sort = arrow(dom.clone(), cod.clone());
                sty_check(&self.sig, &rec_term, &fun_sort).map_err(|e| ProofError {
                    rule: "Pv_CompInd",
                    message: format!("recursive function fails sort checking: {e}"),
                })?;
                if self.declared(f) {
                    return err(
                        "Pv_CompInd",
                        format!("{f} is already declared in the sort context"),
                    );
                }
                let forall_x = |inner: Formula| {
                    Formula::Forall(
                        Hint::new(x.clone()),
                        dom.clone(),
                        Box::new(inner.close(&[x])),
                    )
                };
                let ih = forall_x(pattern.apply(&app(fv(f.clone()), fv(x.clone()))));
                let premise_goal = forall_x(pattern.apply(body));
                self.sig.push((f.clone(), fun_sort));
                self.hyps.push(ih);
                let r = self.check(&premise_goal, premise);
                self.hyps.pop();
                self.sig.pop();
                r?;
                let rec_app = app(rec_term, fv(x.clone()));
                Ok(Some(forall_x(Formula::Imp(
                    Box::new(Formula::Terminates(Box::new(rec_app.clone()))),
                    Box::new(pattern.apply(&rec_app)),
                ))))
            }
            Proof::Impi(_)
            | Proof::TermAbs
            | Proof::TermRec
            | Proof::Contra(_)
            | Proof::NotTermAbort(_)
            | Proof::OpSem(_) => Ok(None),
        }
    }
}

const NOT_SYNTH: &str =
    "conclusion is not determined by the premises; this form only checks against a known goal";

fn rule_name(p: &Proof) -> &'static str {
    match p {
        Proof::Assume(_) => "Pv_Assume",
        Proof::Alli(_, _, _) => "Pv_Alli",
        Proof::Alle(_, _) => "Pv_Alle",
        Proof::Impi(_) => "Pv_Impi",
        Proof::Impe(_, _) => "Pv_Impe",
        Proof::Andi(_, _) => "Pv_Andi",
        Proof::Ande1(_) => "Pv_Ande1",
        Proof::Ande2(_) => "Pv_Ande2",
        Proof::Truei => "Pv_Truei",
        Proof::Contra(_) => "Pv_Contra",
        Proof::Ind { .. } => "Pv_Ind",
        Proof::CompInd { .. } => "Pv_CompInd",
        Proof::Term0 => "Pv_Term0",
        Proof::TermS(_) => "Pv_TermS",
        Proof::TermAbs => "Pv_TermAbs",
        Proof::TermRec => "Pv_TermRec",
        Proof::TermInv(_, _) => "Pv_TermInv",
        Proof::NotTermAbort(_) => "Pv_NotTermAbort",
        Proof::OpSem(_) => "Pv_OpSem",
        Proof::Subst { .. } => "Pv_Subst",
    }
}

/// Inverse of plugging: recovers the focus of `big` along the context.
fn unplug(ctx: &EvalContext, big: &Term) -> Option<Term> {
    match (ctx, big) {
        (EvalContext::Hole, _) => Some(big.clone()),
        (EvalContext::Suc(c), Term::Suc(inner)) => unplug(c, inner),
        (EvalContext::AppL(c, arg), Term::App(f, a)) if **a == *arg => unplug(c, f),
        (EvalContext::AppR(fun, c), Term::App(f, a)) if **f == *fun => unplug(c, a),
        (EvalContext::Case(c, z, s), Term::Case(scr, z2, s2)) if **z2 == *z && **s2 == *s => {
            unplug(c, scr)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::numeral;

    fn cfg() -> CheckConfig {
        CheckConfig::default()
    }

    fn term_f(t: Term) -> Formula {
        Formula::Terminates(Box::new(t))
    }

    fn eq_f(a: Term, b: Term) -> Formula {
        Formula::Eq(Box::new(a), Box::new(b))
    }

    #[test]
    fn term0_checks() {
        let seq = Sequent::new(vec![], vec![], term_f(Term::Zero)).unwrap();
        assert!(check_proof(&seq, &Proof::Term0, &cfg()).is_ok());
    }

    #[test]
    fn term_suc_zero_checks() {
        let seq = Sequent::new(vec![], vec![], term_f(numeral(1))).unwrap();
        let p = Proof::TermS(Box::new(Proof::Term0));
        assert!(check_proof(&seq, &p, &cfg()).is_ok());
    }

    #[test]
    fn term0_against_suc_goal_fails() {
        let seq = Sequent::new(vec![], vec![], term_f(numeral(1))).unwrap();
        let e = check_proof(&seq, &Proof::Term0, &cfg()).unwrap_err();
        assert_eq!(e.rule, "Pv_Term0");
    }

    #[test]
    fn symmetry_via_subst() {
        // x:nat, y:nat ; x = y |- y = x
        let seq = Sequent::new(
            vec![("x".into(), Sort::Nat), ("y".into(), Sort::Nat)],
            vec![eq_f(fv("x"), fv("y"))],
            eq_f(fv("y"), fv("x")),
        )
        .unwrap();
        let p = Proof::Subst {
            pattern: FormulaPattern::new("z", eq_f(fv("z"), fv("x"))),
            eq: Box::new(Proof::Assume(0)),
            body: Box::new(Proof::OpSem(0)),
        };
        assert!(check_proof(&seq, &p, &cfg()).is_ok());
    }

    #[test]
    fn opsem_needs_enough_fuel() {
        use crate::syntax::{app, lam};
        let redex = app(lam("w", fv("w")), Term::Zero);
        let seq = Sequent::new(vec![], vec![], eq_f(redex.clone(), Term::Zero)).unwrap();
        assert!(check_proof(&seq, &Proof::OpSem(1), &cfg()).is_ok());
        let e = check_proof(&seq, &Proof::OpSem(0), &cfg()).unwrap_err();
        assert_eq!(e.rule, "Pv_OpSem");
    }

    #[test]
    fn alli_rejects_capture() {
        // y:nat ; Term y |- forall y : nat . True — introducing y again
        // would capture the hypothesis variable.
        let seq = Sequent::new(
            vec![("y".into(), Sort::Nat)],
            vec![term_f(fv("y"))],
            Formula::Forall(Hint::new("y"), Sort::Nat, Box::new(Formula::True)),
        )
        .unwrap();
        let p = Proof::Alli("y".into(), Sort::Nat, Box::new(Proof::Truei));
        let e = check_proof(&seq, &p, &cfg()).unwrap_err();
        assert_eq!(e.rule, "Pv_Alli");
    }

    #[test]
    fn ind_proves_terminating_implies_true() {
        // |- forall x : nat . Term x => True
        let body = Formula::Imp(Box::new(term_f(fv("x"))), Box::new(Formula::True)).close(&["x"]);
        let goal = Formula::Forall(Hint::new("x"), Sort::Nat, Box::new(body));
        let seq = Sequent::new(vec![], vec![], goal).unwrap();
        let p = Proof::Ind {
            pattern: FormulaPattern::new("x", Formula::True),
            base: Box::new(Proof::Truei),
            step_var: "x'".into(),
            step: Box::new(Proof::Truei),
        };
        assert!(check_proof(&seq, &p, &cfg()).is_ok());
    }

    #[test]
    fn forall_elimination_with_sorted_witness() {
        let all = Formula::Forall(
            Hint::new("x"),
            Sort::Nat,
            Box::new(term_f(fv("x")).close(&["x"])),
        );
        let seq = Sequent::new(vec![], vec![all], term_f(numeral(2))).unwrap();
        let p = Proof::Alle(Box::new(Proof::Assume(0)), numeral(2));
        assert!(check_proof(&seq, &p, &cfg()).is_ok());
    }

    #[test]
    fn modus_ponens() {
        let seq = Sequent::new(
            vec![],
            vec![
                Formula::Imp(Box::new(term_f(Term::Zero)), Box::new(Formula::True)),
                term_f(Term::Zero),
            ],
            Formula::True,
        )
        .unwrap();
        let p = Proof::Impe(Box::new(Proof::Assume(0)), Box::new(Proof::Assume(1)));
        assert!(check_proof(&seq, &p, &cfg()).is_ok());
    }

    #[test]
    fn assume_out_of_range() {
        let seq = Sequent::new(vec![], vec![], Formula::True).unwrap();
        let e = check_proof(&seq, &Proof::Assume(3), &cfg()).unwrap_err();
        assert_eq!(e.rule, "Pv_Assume");
    }
}
