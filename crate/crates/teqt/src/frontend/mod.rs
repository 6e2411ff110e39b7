//! Concrete syntax and source-file processing.
//!
//! Programs are lists of definitions and directives. The language has no
//! definition construct, so definitions are macro-inlined (capture-avoiding)
//! before anything is checked: each name must be defined before use, and
//! directive types may mention earlier definitions too.

mod lex;
mod parse;
mod print;

pub use lex::ParseError;
pub use parse::{
    parse_aterm, parse_atype, parse_formula, parse_program, parse_proof, parse_sequent, parse_term,
    Item, SourceFile,
};

use std::fmt;

use crate::syntax::{ATerm, AType, Effect, Name};

#[derive(Clone, Debug)]
pub struct CheckDirective {
    pub name: Name,
    pub expected: Option<AType>,
    pub effect: Effect,
}

/// A linked program: every definition fully inlined, every directive
/// resolved.
#[derive(Clone, Debug, Default)]
pub struct Program {
    pub defs: Vec<(Name, ATerm)>,
    pub checks: Vec<CheckDirective>,
    pub obligations: Vec<Name>,
    pub evals: Vec<Name>,
}

impl Program {
    pub fn def(&self, name: &str) -> Option<&ATerm> {
        self.defs.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    /// The check directive governing a name (the first one, if several).
    pub fn check_for(&self, name: &str) -> Option<&CheckDirective> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug)]
pub struct LinkError(pub String);

impl fmt::Display for LinkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for LinkError {}

impl SourceFile {
    /// Inlines definitions in order and resolves directive names.
    pub fn link(&self) -> Result<Program, LinkError> {
        let mut program = Program::default();
        for item in &self.items {
            match item {
                Item::Def { name, body } => {
                    if program.def(name).is_some() {
                        return Err(LinkError(format!("duplicate definition of {name}")));
                    }
                    let mut body = body.clone();
                    for (n, t) in &program.defs {
                        body = body.subst(n, t);
                    }
                    program.defs.push((name.clone(), body));
                }
                Item::Check {
                    name,
                    expected,
                    effect,
                } => {
                    require_defined(&program, name)?;
                    let expected = expected.as_ref().map(|ty| {
                        let mut ty = ty.clone();
                        for (n, t) in &program.defs {
                            ty = ty.subst(n, t);
                        }
                        ty
                    });
                    program.checks.push(CheckDirective {
                        name: name.clone(),
                        expected,
                        effect: *effect,
                    });
                }
                Item::Obligation { name } => {
                    require_defined(&program, name)?;
                    program.obligations.push(name.clone());
                }
                Item::Eval { name } => {
                    require_defined(&program, name)?;
                    program.evals.push(name.clone());
                }
            }
        }
        Ok(program)
    }
}

fn require_defined(program: &Program, name: &str) -> Result<(), LinkError> {
    if program.def(name).is_none() {
        return Err(LinkError(format!(
            "directive refers to {name}, which is not defined"
        )));
    }
    Ok(())
}
