use std::collections::BTreeMap;
use std::fmt;

use crate::folsem::{Formula, PredId, PredicateNames, Var};

use super::OracleError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    /// Membership per element.
    Unary(Vec<bool>),
    /// Row-major `size × size` membership.
    Binary(Vec<bool>),
}

/// A finite interpretation over the domain `{0..size}`. Predicates without
/// an extension are interpreted as empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    size: usize,
    extensions: BTreeMap<PredId, Extension>,
}

impl FiniteModel {
    pub fn new(size: usize) -> FiniteModel {
        assert!(size >= 1, "domains are non-empty");
        FiniteModel {
            size,
            extensions: BTreeMap::new(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn set_unary(&mut self, p: PredId, members: impl IntoIterator<Item = usize>) {
        let mut ext = vec![false; self.size];
        for e in members {
            ext[e] = true;
        }
        self.extensions.insert(p, Extension::Unary(ext));
    }

    pub fn set_binary(&mut self, p: PredId, members: impl IntoIterator<Item = (usize, usize)>) {
        let mut ext = vec![false; self.size * self.size];
        for (a, b) in members {
            ext[a * self.size + b] = true;
        }
        self.extensions.insert(p, Extension::Binary(ext));
    }

    pub(crate) fn insert(&mut self, p: PredId, ext: Extension) {
        let expected = match &ext {
            Extension::Unary(v) => v.len() == self.size,
            Extension::Binary(v) => v.len() == self.size * self.size,
        };
        assert!(expected, "extension does not match the domain size");
        self.extensions.insert(p, ext);
    }

    pub fn extension(&self, p: PredId) -> Option<&Extension> {
        self.extensions.get(&p)
    }

    pub fn holds_unary(&self, p: PredId, e: usize) -> bool {
        match self.extensions.get(&p) {
            Some(Extension::Unary(v)) => v[e],
            _ => false,
        }
    }

    pub fn holds_binary(&self, p: PredId, a: usize, b: usize) -> bool {
        match self.extensions.get(&p) {
            Some(Extension::Binary(v)) => v[a * self.size + b],
            _ => false,
        }
    }

    /// Members of an extension, sorted.
    pub fn members(&self, p: PredId) -> Vec<Vec<usize>> {
        match self.extensions.get(&p) {
            Some(Extension::Unary(v)) => (0..self.size).filter(|&e| v[e]).map(|e| vec![e]).collect(),
            Some(Extension::Binary(v)) => (0..self.size * self.size)
                .filter(|&i| v[i])
                .map(|i| vec![i / self.size, i % self.size])
                .collect(),
            None => Vec::new(),
        }
    }

    /// Stable listing: domain first, then each predicate in id order.
    pub fn display<'a>(&'a self, names: &'a dyn PredicateNames) -> impl fmt::Display + 'a {
        ModelDisplay { model: self, names }
    }
}

struct ModelDisplay<'a> {
    model: &'a FiniteModel,
    names: &'a dyn PredicateNames,
}

impl fmt::Display for ModelDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let domain: Vec<String> = (0..self.model.size).map(|e| e.to_string()).collect();
        writeln!(f, "domain: {{{}}}", domain.join(", "))?;
        for p in self.model.extensions.keys() {
            let members: Vec<String> = self
                .model
                .members(*p)
                .into_iter()
                .map(|t| {
                    if t.len() == 1 {
                        t[0].to_string()
                    } else {
                        format!("({}, {})", t[0], t[1])
                    }
                })
                .collect();
            writeln!(f, "{}: {{{}}}", self.names.predicate_name(*p), members.join(", "))?;
        }
        Ok(())
    }
}

/// Variable assignment for [`eval`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<Var, usize>);

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn with(mut self, v: Var, e: usize) -> Assignment {
        self.0.insert(v, e);
        self
    }

    fn get(&self, v: Var) -> Result<usize, OracleError> {
        self.0.get(&v).copied().ok_or(OracleError::Unassigned(v))
    }
}

/// Tarskian evaluation; quantifiers range over the model's domain.
pub fn eval(formula: &Formula, model: &FiniteModel, assignment: &Assignment) -> Result<bool, OracleError> {
    let mut env = assignment.clone();
    eval_in(formula, model, &mut env)
}

fn eval_in(formula: &Formula, model: &FiniteModel, env: &mut Assignment) -> Result<bool, OracleError> {
    match formula {
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let universal = matches!(formula, Formula::Forall(..));
            let saved = env.0.get(v).copied();
            let mut result = universal;
            for e in 0..model.size {
                env.0.insert(*v, e);
                if eval_in(body, model, env)? != universal {
                    result = !universal;
                    break;
                }
            }
            match saved {
                Some(e) => env.0.insert(*v, e),
                None => env.0.remove(v),
            };
            Ok(result)
        }
        Formula::Not(body) => Ok(!eval_in(body, model, env)?),
        Formula::And(parts) => {
            for p in parts {
                if !eval_in(p, model, env)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(parts) => {
            for p in parts {
                if eval_in(p, model, env)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Implies(a, b) => Ok(!eval_in(a, model, env)? || eval_in(b, model, env)?),
        Formula::Unary(p, v) => Ok(model.holds_unary(*p, env.get(*v)?)),
        Formula::Binary(p, a, b) => Ok(model.holds_binary(*p, env.get(*a)?, env.get(*b)?)),
    }
}

/// Whether every closed formula in `formulas` is true in `model`.
pub fn satisfies_all(formulas: &[Formula], model: &FiniteModel) -> Result<bool, OracleError> {
    for f in formulas {
        if !eval(f, model, &Assignment::new())? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folsem::{X, Y};

    const P: PredId = PredId(0);
    const Q: PredId = PredId(1);
    const R: PredId = PredId(2);

    #[test]
    fn basic_evaluation() {
        let mut m = FiniteModel::new(3);
        m.set_unary(P, []);
        m.set_unary(Q, [0, 1]);
        let some_p = Formula::exists(X, Formula::Unary(P, X));
        assert!(!eval(&some_p, &m, &Assignment::new()).unwrap());
        m.set_unary(P, [1]);
        let p_in_q = Formula::forall(X, Formula::implies(Formula::Unary(P, X), Formula::Unary(Q, X)));
        assert!(eval(&p_in_q, &m, &Assignment::new()).unwrap());
        m.set_unary(P, [1, 2]);
        assert!(!eval(&p_in_q, &m, &Assignment::new()).unwrap());
    }

    #[test]
    fn free_variables_need_an_assignment() {
        let m = FiniteModel::new(2);
        let open = Formula::Binary(R, X, Y);
        assert_eq!(eval(&open, &m, &Assignment::new().with(X, 0)), Err(OracleError::Unassigned(Y)));
        assert_eq!(eval(&open, &m, &Assignment::new().with(X, 0).with(Y, 1)), Ok(false));
    }

    #[test]
    fn printer_is_stable() {
        struct Names;
        impl PredicateNames for Names {
            fn predicate_name(&self, id: PredId) -> String {
                ["P", "Q", "R"][id.0 as usize].to_string()
            }
        }
        let mut m = FiniteModel::new(2);
        m.set_binary(R, [(1, 0), (0, 1)]);
        m.set_unary(P, [1]);
        assert_eq!(m.display(&Names).to_string(), "domain: {0, 1}\nP: {1}\nR: {(0, 1), (1, 0)}\n");
    }
}
