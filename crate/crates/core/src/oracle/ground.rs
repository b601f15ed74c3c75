//! Grounding of closed formulas over a fixed domain size into CNF.

use std::collections::BTreeMap;

use crate::folsem::{Formula, PredId, Var};

use super::model::{Extension, FiniteModel};
use super::sat::{Lit, Solver};

/// Ground formula in negation normal form.
#[derive(Clone, Debug)]
enum Prop {
    Const(bool),
    Lit(Lit),
    And(Vec<Prop>),
    Or(Vec<Prop>),
}

impl Prop {
    fn and(parts: Vec<Prop>) -> Prop {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Prop::Const(true) => {}
                Prop::Const(false) => return Prop::Const(false),
                Prop::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Prop::Const(true),
            1 => out.pop().expect("one part"),
            _ => Prop::And(out),
        }
    }

    fn or(parts: Vec<Prop>) -> Prop {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Prop::Const(false) => {}
                Prop::Const(true) => return Prop::Const(true),
                Prop::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Prop::Const(false),
            1 => out.pop().expect("one part"),
            _ => Prop::Or(out),
        }
    }
}

/// Ground encoding of a formula set at one domain size.
pub(crate) struct Grounding {
    size: usize,
    /// First solver variable and arity of each predicate.
    layout: BTreeMap<PredId, (u32, u8)>,
    pub(crate) solver: Solver,
}

impl Grounding {
    pub(crate) fn new(formulas: &[Formula], size: usize) -> Grounding {
        let mut arities: BTreeMap<PredId, u8> = BTreeMap::new();
        for f in formulas {
            for (p, arity) in f.predicates() {
                let previous = arities.insert(p, arity);
                assert!(previous.map_or(true, |a| a == arity), "predicate {p:?} used with two arities");
            }
        }
        let mut solver = Solver::new();
        let mut layout = BTreeMap::new();
        for (p, arity) in arities {
            let count = if arity == 1 { size } else { size * size };
            let first = solver.num_vars() as u32;
            for _ in 0..count {
                solver.new_var();
            }
            layout.insert(p, (first, arity));
        }
        let mut g = Grounding { size, layout, solver };
        let mut env = [usize::MAX; 256];
        for f in formulas {
            let prop = g.ground(f, false, &mut env);
            g.assert(prop);
        }
        g
    }

    fn atom(&self, p: PredId, args: &[usize]) -> u32 {
        let (first, _) = self.layout[&p];
        match args {
            [a] => first + *a as u32,
            [a, b] => first + (*a * self.size + *b) as u32,
            _ => unreachable!("atoms are unary or binary"),
        }
    }

    fn lookup(env: &[usize; 256], v: Var) -> usize {
        let e = env[v.0 as usize];
        assert!(e != usize::MAX, "free variable {v} in a formula given to the model finder");
        e
    }

    fn ground(&self, f: &Formula, negated: bool, env: &mut [usize; 256]) -> Prop {
        match f {
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let conjunctive = matches!(f, Formula::Forall(..)) != negated;
                let saved = env[v.0 as usize];
                let parts = (0..self.size)
                    .map(|e| {
                        env[v.0 as usize] = e;
                        self.ground(body, negated, env)
                    })
                    .collect();
                env[v.0 as usize] = saved;
                if conjunctive {
                    Prop::and(parts)
                } else {
                    Prop::or(parts)
                }
            }
            Formula::Not(body) => self.ground(body, !negated, env),
            Formula::And(parts) | Formula::Or(parts) => {
                let conjunctive = matches!(f, Formula::And(_)) != negated;
                let parts = parts.iter().map(|p| self.ground(p, negated, env)).collect();
                if conjunctive {
                    Prop::and(parts)
                } else {
                    Prop::or(parts)
                }
            }
            Formula::Implies(a, b) => {
                let parts = vec![self.ground(a, !negated, env), self.ground(b, negated, env)];
                if negated {
                    Prop::and(parts)
                } else {
                    Prop::or(parts)
                }
            }
            Formula::Unary(p, v) => {
                let var = self.atom(*p, &[Self::lookup(env, *v)]);
                Prop::Lit(Lit::new(var, !negated))
            }
            Formula::Binary(p, a, b) => {
                let var = self.atom(*p, &[Self::lookup(env, *a), Self::lookup(env, *b)]);
                Prop::Lit(Lit::new(var, !negated))
            }
        }
    }

    /// Literal implying `prop` (one-sided definitional encoding, sound for
    /// positive occurrences, which is all NNF has).
    fn encode(&mut self, prop: Prop) -> Lit {
        match prop {
            Prop::Lit(l) => l,
            Prop::Const(b) => {
                let v = self.solver.new_var();
                self.solver.add_clause(vec![Lit::new(v, b)]);
                Lit::new(v, true)
            }
            Prop::And(parts) => {
                let t = Lit::new(self.solver.new_var(), true);
                for p in parts {
                    let l = self.encode(p);
                    self.solver.add_clause(vec![!t, l]);
                }
                t
            }
            Prop::Or(parts) => {
                let t = Lit::new(self.solver.new_var(), true);
                let mut clause = vec![!t];
                for p in parts {
                    clause.push(self.encode(p));
                }
                self.solver.add_clause(clause);
                t
            }
        }
    }

    fn assert(&mut self, prop: Prop) {
        match prop {
            Prop::Const(true) => {}
            Prop::Const(false) => self.solver.add_clause(Vec::new()),
            Prop::Lit(l) => self.solver.add_clause(vec![l]),
            Prop::And(parts) => parts.into_iter().for_each(|p| self.assert(p)),
            Prop::Or(parts) => {
                let clause = parts.into_iter().map(|p| self.encode(p)).collect();
                self.solver.add_clause(clause);
            }
        }
    }

    pub(crate) fn solve(mut self) -> Option<FiniteModel> {
        let assignment = self.solver.solve()?;
        let mut model = FiniteModel::new(self.size);
        for (p, (first, arity)) in &self.layout {
            let count = if *arity == 1 { self.size } else { self.size * self.size };
            let bits = assignment[*first as usize..*first as usize + count].to_vec();
            model.insert(
                *p,
                if *arity == 1 {
                    Extension::Unary(bits)
                } else {
                    Extension::Binary(bits)
                },
            );
        }
        Some(model)
    }
}
