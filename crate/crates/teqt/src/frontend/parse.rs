//! Recursive-descent parsers for programs, formulas, and proof scripts.
//!
//! Binders are resolved during parsing: an identifier is looked up in the
//! enclosing binder stack and becomes an index, otherwise it stays a free
//! name. Applications are sequences of atoms; keyword forms take atoms as
//! arguments; binder-headed forms extend as far right as possible.

use crate::eval::EvalContext;
use crate::kernel::{FormulaPattern, Proof};
use crate::logic::{arrow, Formula, Sequent, Sort};
use crate::syntax::{ATerm, AType, Effect, Hint, Name, Term, Var};

use super::lex::{lex, ParseError, Tok, Token};

const RESERVED: &[&str] = &[
    "nat",
    "Pi",
    "Term",
    "Suc",
    "rec",
    "recnat",
    "case",
    "join",
    "conv",
    "by",
    "reflect",
    "tm",
    "inv",
    "at",
    "contra",
    "abort",
    "def",
    "check",
    "eval",
    "obligation",
    "sigma",
    "hyps",
    "goal",
    "forall",
    "True",
];

fn is_reserved(s: &str) -> bool {
    RESERVED.contains(&s)
}

const PROOF_KEYWORDS: &[&str] = &[
    "assume",
    "alli",
    "alle",
    "impi",
    "impe",
    "andi",
    "ande1",
    "ande2",
    "truei",
    "contra",
    "ind",
    "compind",
    "term0",
    "termS",
    "termabs",
    "termrec",
    "terminv",
    "nottermabort",
    "opsem",
    "subst",
];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Enclosing binder names, innermost last.
    env: Vec<Name>,
    /// When set, `_` is accepted as the context hole.
    allow_hole: bool,
    /// Inside a sequent header a `(` that opens a proof ends the formula.
    script_mode: bool,
}

/// One parsed item of a source file, before definition inlining.
#[derive(Clone, Debug)]
pub enum Item {
    Def {
        name: Name,
        body: ATerm,
    },
    Check {
        name: Name,
        expected: Option<AType>,
        effect: Effect,
    },
    Obligation {
        name: Name,
    },
    Eval {
        name: Name,
    },
}

#[derive(Clone, Debug, Default)]
pub struct SourceFile {
    pub items: Vec<Item>,
}

impl Parser {
    fn new(input: &str) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(input)?,
            pos: 0,
            env: Vec::new(),
            allow_hole: false,
            script_mode: false,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (u32, u32) {
        match self.toks.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => self
                .toks
                .last()
                .map(|t| (t.line, t.col + 1))
                .unwrap_or((1, 1)),
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, col) = self.here();
        Err(ParseError {
            line,
            col,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if t == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => {
                let t = t.clone();
                self.error(format!("expected {tok}, found {t}"))
            }
            None => self.error(format!("expected {tok}, found end of input")),
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => {
                let t = t.clone();
                self.error(format!("expected {kw}, found {t}"))
            }
            None => self.error(format!("expected {kw}, found end of input")),
        }
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn ident(&mut self) -> Result<Name, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !is_reserved(s) && s != "_" => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            Some(t) => {
                let t = t.clone();
                self.error(format!("expected identifier, found {t}"))
            }
            None => self.error("expected identifier, found end of input"),
        }
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => self.error("expected a number"),
        }
    }

    fn effect(&mut self) -> Result<Effect, ParseError> {
        match self.next() {
            Some(Tok::Bang) => Ok(Effect::Total),
            Some(Tok::Question) => Ok(Effect::General),
            other => {
                self.pos = self.pos.saturating_sub(other.is_some() as usize);
                self.error("expected an effect (! or ?)")
            }
        }
    }

    /// Resolves an identifier occurrence against the binder stack.
    fn var(&self, name: &str) -> Var {
        match self.env.iter().rev().position(|n| n == name) {
            Some(i) => Var::Bound(i as u32),
            None => Var::Free(name.to_string()),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    // --- annotated terms -------------------------------------------------

    fn aterm(&mut self) -> Result<ATerm, ParseError> {
        match self.peek() {
            Some(Tok::Backslash) => {
                self.next();
                let eff = self.effect()?;
                let x = self.ident()?;
                self.expect(&Tok::Colon)?;
                let dom = self.atype()?;
                self.expect(&Tok::Dot)?;
                self.env.push(x.clone());
                let body = self.aterm();
                self.env.pop();
                Ok(ATerm::Lam(
                    eff,
                    Hint::new(x),
                    Box::new(dom),
                    Box::new(body?),
                ))
            }
            Some(Tok::Ident(s)) if s == "rec" => {
                self.next();
                let f = self.ident()?;
                self.expect(&Tok::LPar)?;
                let x = self.ident()?;
                self.expect(&Tok::Colon)?;
                let dom = self.atype()?;
                self.expect(&Tok::RPar)?;
                self.expect(&Tok::Colon)?;
                self.env.push(x.clone());
                let cod = self.atype();
                self.env.pop();
                let cod = cod?;
                self.expect(&Tok::Equals)?;
                self.env.push(f.clone());
                self.env.push(x.clone());
                let body = self.aterm();
                self.env.pop();
                self.env.pop();
                Ok(ATerm::Rec(
                    Hint::new(f),
                    Hint::new(x),
                    Box::new(dom),
                    Box::new(cod),
                    Box::new(body?),
                ))
            }
            Some(Tok::Ident(s)) if s == "recnat" => {
                self.next();
                let f = self.ident()?;
                self.expect(&Tok::LPar)?;
                let x = self.ident()?;
                self.expect(&Tok::Comma)?;
                let p = self.ident()?;
                self.expect(&Tok::RPar)?;
                self.expect(&Tok::Colon)?;
                self.env.push(x.clone());
                let ann = self.atype();
                self.env.pop();
                let ann = ann?;
                self.expect(&Tok::Equals)?;
                self.env.push(f.clone());
                self.env.push(x.clone());
                self.env.push(p.clone());
                let body = self.aterm();
                self.env.truncate(self.env.len() - 3);
                Ok(ATerm::RecNat(
                    Hint::new(f),
                    Hint::new(x),
                    Hint::new(p),
                    Box::new(ann),
                    Box::new(body?),
                ))
            }
            Some(Tok::Ident(s)) if s == "conv" => {
                self.next();
                let (x, pat) = self.bracket_scope_atype()?;
                let subject = self.aterm_app()?;
                self.expect_kw("by")?;
                let proof = self.aterm_app()?;
                Ok(ATerm::Conv(
                    Hint::new(x),
                    Box::new(pat),
                    Box::new(subject),
                    Box::new(proof),
                ))
            }
            Some(Tok::Ident(s)) if s == "reflect" => {
                self.next();
                let subject = self.aterm_app()?;
                self.expect_kw("by")?;
                let proof = self.aterm_app()?;
                Ok(ATerm::Reflect(Box::new(subject), Box::new(proof)))
            }
            Some(Tok::Ident(s)) if s == "inv" => {
                self.next();
                let proof = self.aterm_app()?;
                self.expect_kw("at")?;
                let sub = self.aterm_app()?;
                Ok(ATerm::Inv(Box::new(proof), Box::new(sub)))
            }
            _ => self.aterm_app(),
        }
    }

    /// `[x . S]` with x bound in S.
    fn bracket_scope_atype(&mut self) -> Result<(Name, AType), ParseError> {
        self.expect(&Tok::LBrack)?;
        let x = self.ident()?;
        self.expect(&Tok::Dot)?;
        self.env.push(x.clone());
        let ty = self.atype();
        self.env.pop();
        self.expect(&Tok::RBrack)?;
        Ok((x, ty?))
    }

    fn aterm_app(&mut self) -> Result<ATerm, ParseError> {
        let mut head = self.aterm_head()?;
        while self.starts_aterm_atom() {
            let arg = self.aterm_atom()?;
            head = ATerm::App(Box::new(head), Box::new(arg));
        }
        Ok(head)
    }

    fn aterm_head(&mut self) -> Result<ATerm, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "Suc" => {
                self.next();
                Ok(ATerm::Suc(Box::new(self.aterm_atom()?)))
            }
            Some(Tok::Ident(s)) if s == "join" => {
                self.next();
                let l = self.aterm_atom()?;
                let r = self.aterm_atom()?;
                Ok(ATerm::Join(Box::new(l), Box::new(r)))
            }
            Some(Tok::Ident(s)) if s == "tm" => {
                self.next();
                Ok(ATerm::Terminates(Box::new(self.aterm_atom()?)))
            }
            Some(Tok::Ident(s)) if s == "case" => {
                self.next();
                let (x, motive) = self.bracket_scope_atype()?;
                let scrut = self.aterm_atom()?;
                let zbr = self.aterm_atom()?;
                let sbr = self.aterm_atom()?;
                Ok(ATerm::Case(
                    Hint::new(x),
                    Box::new(motive),
                    Box::new(scrut),
                    Box::new(zbr),
                    Box::new(sbr),
                ))
            }
            Some(Tok::Ident(s)) if s == "contra" => {
                self.next();
                let ann = self.atype_atom()?;
                let proof = self.aterm_atom()?;
                Ok(ATerm::Contra(Box::new(ann), Box::new(proof)))
            }
            Some(Tok::Ident(s)) if s == "abort" => {
                self.next();
                Ok(ATerm::Abort(Box::new(self.atype_atom()?)))
            }
            _ => self.aterm_atom(),
        }
    }

    fn starts_aterm_atom(&self) -> bool {
        match self.peek() {
            Some(Tok::Num(0)) | Some(Tok::LPar) => true,
            Some(Tok::Ident(s)) => !is_reserved(s) && s != "_",
            _ => false,
        }
    }

    fn aterm_atom(&mut self) -> Result<ATerm, ParseError> {
        match self.peek() {
            Some(Tok::Num(0)) => {
                self.next();
                Ok(ATerm::Zero)
            }
            Some(Tok::Num(_)) => {
                self.error("only the numeral 0 exists; write Suc (...) for successors")
            }
            Some(Tok::LPar) => {
                self.next();
                let t = self.aterm()?;
                self.expect(&Tok::RPar)?;
                Ok(t)
            }
            Some(Tok::Ident(s)) if !is_reserved(s) && s != "_" => {
                let s = s.clone();
                self.next();
                Ok(ATerm::Var(self.var(&s)))
            }
            _ => self.error("expected a term"),
        }
    }

    // --- annotated types --------------------------------------------------

    fn atype(&mut self) -> Result<AType, ParseError> {
        if self.at_kw("Pi") {
            self.next();
            let eff = self.effect()?;
            let x = self.ident()?;
            self.expect(&Tok::Colon)?;
            let dom = self.atype()?;
            self.expect(&Tok::Dot)?;
            self.env.push(x.clone());
            let cod = self.atype();
            self.env.pop();
            return Ok(AType::Pi(eff, Hint::new(x), Box::new(dom), Box::new(cod?)));
        }
        if self.at_kw("nat") {
            self.next();
            return Ok(AType::Nat);
        }
        if self.at_kw("Term") {
            self.next();
            return Ok(AType::Terminates(Box::new(self.aterm_atom()?)));
        }
        // Equation or parenthesized type; try the equation first.
        let save = self.pos;
        match self.try_aterm_eq() {
            Ok(ty) => Ok(ty),
            Err(_) => {
                self.pos = save;
                self.expect(&Tok::LPar)?;
                let ty = self.atype()?;
                self.expect(&Tok::RPar)?;
                Ok(ty)
            }
        }
    }

    fn try_aterm_eq(&mut self) -> Result<AType, ParseError> {
        let l = self.aterm_app()?;
        self.expect(&Tok::Equals)?;
        let r = self.aterm_app()?;
        Ok(AType::Eq(Box::new(l), Box::new(r)))
    }

    fn atype_atom(&mut self) -> Result<AType, ParseError> {
        if self.at_kw("nat") {
            self.next();
            return Ok(AType::Nat);
        }
        if self.at_kw("Term") {
            self.next();
            return Ok(AType::Terminates(Box::new(self.aterm_atom()?)));
        }
        self.expect(&Tok::LPar)?;
        let ty = self.atype()?;
        self.expect(&Tok::RPar)?;
        Ok(ty)
    }

    // --- implicit terms ----------------------------------------------------

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Backslash) => {
                self.next();
                let x = self.ident()?;
                self.expect(&Tok::Dot)?;
                self.env.push(x.clone());
                let body = self.term();
                self.env.pop();
                Ok(Term::Lam(Hint::new(x), Box::new(body?)))
            }
            Some(Tok::Ident(s)) if s == "rec" => {
                self.next();
                let f = self.ident()?;
                self.expect(&Tok::LPar)?;
                let x = self.ident()?;
                self.expect(&Tok::RPar)?;
                self.expect(&Tok::Equals)?;
                self.env.push(f.clone());
                self.env.push(x.clone());
                let body = self.term();
                self.env.pop();
                self.env.pop();
                Ok(Term::Rec(Hint::new(f), Hint::new(x), Box::new(body?)))
            }
            _ => self.term_app(),
        }
    }

    fn term_app(&mut self) -> Result<Term, ParseError> {
        let mut head = self.term_head()?;
        while self.starts_term_atom() {
            let arg = self.term_atom()?;
            head = Term::App(Box::new(head), Box::new(arg));
        }
        Ok(head)
    }

    fn term_head(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "Suc" => {
                self.next();
                Ok(Term::Suc(Box::new(self.term_atom()?)))
            }
            Some(Tok::Ident(s)) if s == "case" => {
                self.next();
                let scrut = self.term_atom()?;
                let zbr = self.term_atom()?;
                let sbr = self.term_atom()?;
                Ok(Term::Case(Box::new(scrut), Box::new(zbr), Box::new(sbr)))
            }
            _ => self.term_atom(),
        }
    }

    fn starts_term_atom(&self) -> bool {
        match self.peek() {
            Some(Tok::Num(0)) => true,
            Some(Tok::LPar) => !(self.script_mode && self.lpar_opens_proof()),
            Some(Tok::Ident(s)) => {
                matches!(s.as_str(), "join" | "tm" | "contra" | "abort")
                    || (!is_reserved(s) && (s != "_" || self.allow_hole))
            }
            _ => false,
        }
    }

    fn lpar_opens_proof(&self) -> bool {
        matches!(
            self.toks.get(self.pos + 1),
            Some(Token { tok: Tok::Ident(s), .. }) if PROOF_KEYWORDS.contains(&s.as_str())
        )
    }

    fn term_atom(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(Tok::Num(0)) => {
                self.next();
                Ok(Term::Zero)
            }
            Some(Tok::Num(_)) => {
                self.error("only the numeral 0 exists; write Suc (...) for successors")
            }
            Some(Tok::LPar) => {
                self.next();
                let t = self.term()?;
                self.expect(&Tok::RPar)?;
                Ok(t)
            }
            Some(Tok::Ident(s)) if s == "join" => {
                self.next();
                Ok(Term::Join)
            }
            Some(Tok::Ident(s)) if s == "tm" => {
                self.next();
                Ok(Term::Terminates)
            }
            Some(Tok::Ident(s)) if s == "contra" => {
                self.next();
                Ok(Term::Contra)
            }
            Some(Tok::Ident(s)) if s == "abort" => {
                self.next();
                Ok(Term::Abort)
            }
            Some(Tok::Ident(s)) if s == "_" && self.allow_hole => {
                self.next();
                Ok(Term::Var(Var::Free("_".into())))
            }
            Some(Tok::Ident(s)) if !is_reserved(s) && s != "_" => {
                let s = s.clone();
                self.next();
                Ok(Term::Var(self.var(&s)))
            }
            _ => self.error("expected a term"),
        }
    }

    // --- sorts and formulas -------------------------------------------------

    fn sort(&mut self) -> Result<Sort, ParseError> {
        let l = self.sort_atom()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.next();
            let r = self.sort()?;
            Ok(arrow(l, r))
        } else {
            Ok(l)
        }
    }

    fn sort_atom(&mut self) -> Result<Sort, ParseError> {
        if self.at_kw("nat") {
            self.next();
            return Ok(Sort::Nat);
        }
        self.expect(&Tok::LPar)?;
        let s = self.sort()?;
        self.expect(&Tok::RPar)?;
        Ok(s)
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        if self.at_kw("forall") {
            self.next();
            let x = self.ident()?;
            self.expect(&Tok::Colon)?;
            let sort = self.sort()?;
            self.expect(&Tok::Dot)?;
            self.env.push(x.clone());
            let body = self.formula();
            self.env.pop();
            return Ok(Formula::Forall(Hint::new(x), sort, Box::new(body?)));
        }
        self.formula_imp()
    }

    fn formula_imp(&mut self) -> Result<Formula, ParseError> {
        let l = self.formula_and()?;
        if self.peek() == Some(&Tok::FatArrow) {
            self.next();
            let r = self.formula_imp()?;
            Ok(Formula::Imp(Box::new(l), Box::new(r)))
        } else {
            Ok(l)
        }
    }

    fn formula_and(&mut self) -> Result<Formula, ParseError> {
        let l = self.formula_atom()?;
        if self.peek() == Some(&Tok::AndSym) {
            self.next();
            let r = self.formula_and()?;
            Ok(Formula::And(Box::new(l), Box::new(r)))
        } else {
            Ok(l)
        }
    }

    fn formula_atom(&mut self) -> Result<Formula, ParseError> {
        if self.at_kw("True") {
            self.next();
            return Ok(Formula::True);
        }
        if self.at_kw("Term") {
            self.next();
            return Ok(Formula::Terminates(Box::new(self.term_atom()?)));
        }
        if self.at_kw("forall") {
            // A quantifier is fine as an operand; it extends right maximally.
            return self.formula();
        }
        // Equation or parenthesized formula; try the equation first.
        let save = self.pos;
        match self.try_term_eq() {
            Ok(f) => Ok(f),
            Err(_) => {
                self.pos = save;
                self.expect(&Tok::LPar)?;
                let f = self.formula()?;
                self.expect(&Tok::RPar)?;
                Ok(f)
            }
        }
    }

    fn try_term_eq(&mut self) -> Result<Formula, ParseError> {
        let l = self.term_app()?;
        self.expect(&Tok::Equals)?;
        let r = self.term_app()?;
        Ok(Formula::Eq(Box::new(l), Box::new(r)))
    }

    // --- proofs ---------------------------------------------------------------

    fn context_atom(&mut self) -> Result<EvalContext, ParseError> {
        self.allow_hole = true;
        let t = self.term_atom();
        self.allow_hole = false;
        let t = t?;
        match term_to_context(&t) {
            Some(c) => Ok(c),
            None => self.error(
                "not a valid evaluation context (need exactly one _ in an evaluation position)",
            ),
        }
    }

    fn pattern(&mut self) -> Result<(Name, Formula), ParseError> {
        let hole = self.ident()?;
        self.expect(&Tok::LBrack)?;
        let f = self.formula()?;
        self.expect(&Tok::RBrack)?;
        Ok((hole, f))
    }

    fn proof(&mut self) -> Result<Proof, ParseError> {
        self.expect(&Tok::LPar)?;
        let kw = match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                s
            }
            _ => return self.error("expected a proof rule keyword"),
        };
        let p = match kw.as_str() {
            "assume" => Proof::Assume(self.number()? as usize),
            "alli" => {
                let x = self.ident()?;
                let s = self.sort()?;
                let q = self.proof()?;
                Proof::Alli(x, s, Box::new(q))
            }
            "alle" => {
                let q = self.proof()?;
                let t = self.term_atom()?;
                Proof::Alle(Box::new(q), t)
            }
            "impi" => Proof::Impi(Box::new(self.proof()?)),
            "impe" => {
                let q = self.proof()?;
                let r = self.proof()?;
                Proof::Impe(Box::new(q), Box::new(r))
            }
            "andi" => {
                let q = self.proof()?;
                let r = self.proof()?;
                Proof::Andi(Box::new(q), Box::new(r))
            }
            "ande1" => Proof::Ande1(Box::new(self.proof()?)),
            "ande2" => Proof::Ande2(Box::new(self.proof()?)),
            "truei" => Proof::Truei,
            "contra" => Proof::Contra(Box::new(self.proof()?)),
            "ind" => {
                let (hole, formula) = self.pattern()?;
                let base = self.proof()?;
                let step_var = self.ident()?;
                let step = self.proof()?;
                Proof::Ind {
                    pattern: FormulaPattern::new(hole, formula),
                    base: Box::new(base),
                    step_var,
                    step: Box::new(step),
                }
            }
            "compind" => {
                let (hole, formula) = self.pattern()?;
                let f = self.ident()?;
                let x = self.ident()?;
                let body = self.term_atom()?;
                let dom = self.sort()?;
                let cod = self.sort()?;
                let premise = self.proof()?;
                Proof::CompInd {
                    pattern: FormulaPattern::new(hole, formula),
                    f,
                    x,
                    body,
                    dom,
                    cod,
                    premise: Box::new(premise),
                }
            }
            "term0" => Proof::Term0,
            "termS" => Proof::TermS(Box::new(self.proof()?)),
            "termabs" => Proof::TermAbs,
            "termrec" => Proof::TermRec,
            "terminv" => {
                let c = self.context_atom()?;
                let q = self.proof()?;
                Proof::TermInv(c, Box::new(q))
            }
            "nottermabort" => Proof::NotTermAbort(Box::new(self.proof()?)),
            "opsem" => Proof::OpSem(self.number()? as usize),
            "subst" => {
                let (hole, formula) = self.pattern()?;
                let eq = self.proof()?;
                let body = self.proof()?;
                Proof::Subst {
                    pattern: FormulaPattern::new(hole, formula),
                    eq: Box::new(eq),
                    body: Box::new(body),
                }
            }
            other => return self.error(format!("unknown proof rule keyword {other}")),
        };
        self.expect(&Tok::RPar)?;
        Ok(p)
    }

    // --- sequents, scripts, source files -----------------------------------

    fn sequent(&mut self) -> Result<Sequent, ParseError> {
        self.script_mode = true;
        let r = self.sequent_inner();
        self.script_mode = false;
        r
    }

    fn sequent_inner(&mut self) -> Result<Sequent, ParseError> {
        let mut sig = Vec::new();
        if self.at_kw("sigma") {
            self.next();
            self.expect(&Tok::Colon)?;
            loop {
                let x = self.ident()?;
                self.expect(&Tok::Colon)?;
                let s = self.sort()?;
                sig.push((x, s));
                if self.peek() == Some(&Tok::Comma) {
                    self.next();
                } else {
                    break;
                }
            }
        }
        let mut hyps = Vec::new();
        if self.at_kw("hyps") {
            self.next();
            self.expect(&Tok::Colon)?;
            loop {
                hyps.push(self.formula()?);
                if self.peek() == Some(&Tok::Comma) {
                    self.next();
                } else {
                    break;
                }
            }
        }
        self.expect_kw("goal")?;
        self.expect(&Tok::Colon)?;
        let goal = self.formula()?;
        match Sequent::new(sig, hyps, goal) {
            Ok(s) => Ok(s),
            Err(e) => self.error(e.to_string()),
        }
    }

    fn source_file(&mut self) -> Result<SourceFile, ParseError> {
        let mut items = Vec::new();
        while !self.at_end() {
            if self.at_kw("def") {
                self.next();
                let name = self.ident()?;
                self.expect(&Tok::Equals)?;
                let body = self.aterm()?;
                items.push(Item::Def { name, body });
            } else if self.at_kw("check") {
                self.next();
                let name = self.ident()?;
                let expected = if self.peek() == Some(&Tok::Colon) {
                    self.next();
                    Some(self.atype()?)
                } else {
                    None
                };
                self.expect_kw("at")?;
                let effect = self.effect()?;
                items.push(Item::Check {
                    name,
                    expected,
                    effect,
                });
            } else if self.at_kw("obligation") {
                self.next();
                let name = self.ident()?;
                items.push(Item::Obligation { name });
            } else if self.at_kw("eval") {
                self.next();
                let name = self.ident()?;
                items.push(Item::Eval { name });
            } else {
                return self.error("expected def, check, obligation, or eval");
            }
        }
        Ok(SourceFile { items })
    }
}

/// Converts a term with exactly one `_` in an evaluation position into the
/// corresponding context.
fn term_to_context(t: &Term) -> Option<EvalContext> {
    fn has_hole(t: &Term) -> bool {
        t.free_vars().contains("_")
    }
    if matches!(t, Term::Var(Var::Free(n)) if n == "_") {
        return Some(EvalContext::Hole);
    }
    match t {
        Term::Suc(inner) => Some(EvalContext::Suc(Box::new(term_to_context(inner)?))),
        Term::App(f, a) => {
            if has_hole(f) {
                if has_hole(a) {
                    None
                } else {
                    Some(EvalContext::AppL(
                        Box::new(term_to_context(f)?),
                        (**a).clone(),
                    ))
                }
            } else if has_hole(a) && crate::eval::is_value(f) {
                Some(EvalContext::AppR(
                    (**f).clone(),
                    Box::new(term_to_context(a)?),
                ))
            } else {
                None
            }
        }
        Term::Case(s, z, sc) => {
            if has_hole(z) || has_hole(sc) {
                None
            } else {
                Some(EvalContext::Case(
                    Box::new(term_to_context(s)?),
                    (**z).clone(),
                    (**sc).clone(),
                ))
            }
        }
        _ => None,
    }
}

fn parse_all<T>(
    input: &str,
    f: impl FnOnce(&mut Parser) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    let mut p = Parser::new(input)?;
    let v = f(&mut p)?;
    if !p.at_end() {
        return p.error("trailing input");
    }
    Ok(v)
}

pub fn parse_program(input: &str) -> Result<SourceFile, ParseError> {
    parse_all(input, |p| p.source_file())
}

pub fn parse_aterm(input: &str) -> Result<ATerm, ParseError> {
    parse_all(input, |p| p.aterm())
}

pub fn parse_atype(input: &str) -> Result<AType, ParseError> {
    parse_all(input, |p| p.atype())
}

pub fn parse_term(input: &str) -> Result<Term, ParseError> {
    parse_all(input, |p| p.term())
}

pub fn parse_formula(input: &str) -> Result<Formula, ParseError> {
    parse_all(input, |p| p.formula())
}

pub fn parse_sequent(input: &str) -> Result<Sequent, ParseError> {
    parse_all(input, |p| p.sequent())
}

/// A proof script: a sequent header followed by one proof term.
pub fn parse_proof(input: &str) -> Result<(Sequent, Proof), ParseError> {
    parse_all(input, |p| {
        let seq = p.sequent()?;
        let proof = p.proof()?;
        Ok((seq, proof))
    })
}
