use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::term::Term;

/// Predicate name reserved for built-in equality inside clauses.
pub const EQUALITY: &str = "=";

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Atom {
        Atom {
            pred: pred.into(),
            args,
        }
    }

    pub fn is_equality(&self) -> bool {
        self.pred == EQUALITY && self.args.len() == 2
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn weight(&self) -> usize {
        1 + self.args.iter().map(Term::weight).sum::<usize>()
    }

    pub fn map_terms(&self, f: impl Fn(&Term) -> Term) -> Atom {
        Atom {
            pred: self.pred.clone(),
            args: self.args.iter().map(f).collect(),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_equality() {
            return write!(f, "{} = {}", self.args[0], self.args[1]);
        }
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(Atom::new(pred, args))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }

    /// Right-nested conjunction; `True` for an empty list.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut parts: Vec<Formula> = parts.into_iter().collect();
        let Some(mut acc) = parts.pop() else {
            return Formula::True;
        };
        while let Some(p) = parts.pop() {
            acc = Formula::and(p, acc);
        }
        acc
    }

    pub fn disjunction(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut parts: Vec<Formula> = parts.into_iter().collect();
        let Some(mut acc) = parts.pop() else {
            return Formula::False;
        };
        while let Some(p) = parts.pop() {
            acc = Formula::or(p, acc);
        }
        acc
    }

    /// Top-level conjuncts, flattening nested `And`.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::And(a, b) => {
                let mut v = a.conjuncts();
                v.extend(b.conjuncts());
                v
            }
            other => vec![other],
        }
    }

    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Eq(..) => true,
            Formula::Not(inner) => matches!(**inner, Formula::Atom(_) | Formula::Eq(..)),
            _ => false,
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) | Formula::Eq(..) => true,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.is_quantifier_free() && self.free_vars().is_empty()
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let push_term = |t: &Term, bound: &Vec<String>, out: &mut Vec<String>| {
            let mut vs = Vec::new();
            t.collect_vars(&mut vs);
            for v in vs {
                if !bound.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => a.args.iter().for_each(|t| push_term(t, bound, out)),
            Formula::Eq(s, t) => {
                push_term(s, bound, out);
                push_term(t, bound, out);
            }
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name appearing anywhere, bound or free.
    pub fn all_var_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            Formula::Forall(v, _) | Formula::Exists(v, _) => {
                out.insert(v.clone());
            }
            Formula::Atom(a) => a.args.iter().for_each(|t| insert_vars(t, &mut out)),
            Formula::Eq(s, t) => {
                insert_vars(s, &mut out);
                insert_vars(t, &mut out);
            }
            _ => {}
        });
        out
    }

    fn walk(&self, visit: &mut impl FnMut(&Formula)) {
        visit(self);
        match self {
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.walk(visit),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
            _ => {}
        }
    }

    /// Predicate symbols with arities, excluding equality.
    pub fn predicates(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Atom(a) = f {
                out.insert((a.pred.clone(), a.args.len()));
            }
        });
        out
    }

    pub fn functions(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            Formula::Atom(a) => a.args.iter().for_each(|t| t.collect_functions(&mut out)),
            Formula::Eq(s, t) => {
                s.collect_functions(&mut out);
                t.collect_functions(&mut out);
            }
            _ => {}
        });
        out
    }

    /// Non-logical symbol names (predicates and functions, equality excluded).
    pub fn symbols(&self) -> BTreeSet<String> {
        self.predicates()
            .into_iter()
            .chain(self.functions())
            .map(|(name, _)| name)
            .collect()
    }

    pub fn contains_equality(&self) -> bool {
        let mut found = false;
        self.walk(&mut |f| found |= matches!(f, Formula::Eq(..)));
        found
    }

    /// Capture-avoiding substitution of free variables.
    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Formula {
        if map.is_empty() {
            return self.clone();
        }
        let sub = |t: &Term| subst_term(t, map);
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => Formula::Atom(a.map_terms(sub)),
            Formula::Eq(s, t) => Formula::Eq(sub(s), sub(t)),
            Formula::Not(a) => Formula::not(a.substitute(map)),
            Formula::And(a, b) => Formula::and(a.substitute(map), b.substitute(map)),
            Formula::Or(a, b) => Formula::or(a.substitute(map), b.substitute(map)),
            Formula::Implies(a, b) => Formula::implies(a.substitute(map), b.substitute(map)),
            Formula::Iff(a, b) => Formula::iff(a.substitute(map), b.substitute(map)),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let mut inner = map.clone();
                inner.remove(v);
                let mut range_vars = Vec::new();
                for (k, t) in &inner {
                    if body.free_vars().contains(k) {
                        t.collect_vars(&mut range_vars);
                    }
                }
                let (v2, body2) = if range_vars.contains(v) {
                    let mut used = body.all_var_names();
                    used.extend(range_vars);
                    used.extend(inner.keys().cloned());
                    let fresh = fresh_name(v, &used);
                    let renamed =
                        body.substitute(&BTreeMap::from([(v.clone(), Term::Var(fresh.clone()))]));
                    (fresh, renamed)
                } else {
                    (v.clone(), (**body).clone())
                };
                let new_body = Box::new(body2.substitute(&inner));
                match self {
                    Formula::Forall(..) => Formula::Forall(v2, new_body),
                    _ => Formula::Exists(v2, new_body),
                }
            }
        }
    }

    pub fn substitute_var(&self, var: &str, term: &Term) -> Formula {
        self.substitute(&BTreeMap::from([(var.to_string(), term.clone())]))
    }

    /// Renames bound variables so that every binder introduces a distinct
    /// name that also differs from every free variable.
    pub fn rectify(&self) -> Formula {
        let mut used: BTreeSet<String> = self.free_vars().into_iter().collect();
        self.rectify_with(&mut used, &BTreeMap::new())
    }

    fn rectify_with(&self, used: &mut BTreeSet<String>, env: &BTreeMap<String, Term>) -> Formula {
        let sub = |t: &Term| subst_term(t, env);
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => Formula::Atom(a.map_terms(sub)),
            Formula::Eq(s, t) => Formula::Eq(sub(s), sub(t)),
            Formula::Not(a) => Formula::not(a.rectify_with(used, env)),
            Formula::And(a, b) => {
                let a = a.rectify_with(used, env);
                Formula::and(a, b.rectify_with(used, env))
            }
            Formula::Or(a, b) => {
                let a = a.rectify_with(used, env);
                Formula::or(a, b.rectify_with(used, env))
            }
            Formula::Implies(a, b) => {
                let a = a.rectify_with(used, env);
                Formula::implies(a, b.rectify_with(used, env))
            }
            Formula::Iff(a, b) => {
                let a = a.rectify_with(used, env);
                Formula::iff(a, b.rectify_with(used, env))
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let name = fresh_name(v, used);
                used.insert(name.clone());
                let mut env = env.clone();
                env.insert(v.clone(), Term::Var(name.clone()));
                let body = Box::new(body.rectify_with(used, &env));
                match self {
                    Formula::Forall(..) => Formula::Forall(name, body),
                    _ => Formula::Exists(name, body),
                }
            }
        }
    }

    /// Alpha-equivalence: equal after canonical renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self.canonical_bound() == other.canonical_bound()
    }

    /// Bound variables renamed to `#0, #1, ...` in binder order.
    pub fn canonical_bound(&self) -> Formula {
        let mut counter = 0usize;
        self.canon(&BTreeMap::new(), &mut counter)
    }

    fn canon(&self, env: &BTreeMap<String, Term>, counter: &mut usize) -> Formula {
        let sub = |t: &Term| subst_term(t, env);
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Atom(a) => Formula::Atom(a.map_terms(sub)),
            Formula::Eq(s, t) => Formula::Eq(sub(s), sub(t)),
            Formula::Not(a) => Formula::not(a.canon(env, counter)),
            Formula::And(a, b) => Formula::and(a.canon(env, counter), b.canon(env, counter)),
            Formula::Or(a, b) => Formula::or(a.canon(env, counter), b.canon(env, counter)),
            Formula::Implies(a, b) => {
                Formula::implies(a.canon(env, counter), b.canon(env, counter))
            }
            Formula::Iff(a, b) => Formula::iff(a.canon(env, counter), b.canon(env, counter)),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let name = format!("#{counter}");
                *counter += 1;
                let mut env = env.clone();
                env.insert(v.clone(), Term::Var(name.clone()));
                let body = Box::new(body.canon(&env, counter));
                match self {
                    Formula::Forall(..) => Formula::Forall(name, body),
                    _ => Formula::Exists(name, body),
                }
            }
        }
    }

    /// Universal closure over the free variables, outermost first.
    pub fn universal_closure(&self) -> Formula {
        self.free_vars()
            .into_iter()
            .rev()
            .fold(self.clone(), |acc, v| Formula::forall(v, acc))
    }

    /// Replaces atoms via `rewrite`; `None` keeps the atom.
    pub fn map_atoms(&self, rewrite: &mut impl FnMut(&Atom) -> Option<Formula>) -> Formula {
        match self {
            Formula::Atom(a) => rewrite(a).unwrap_or_else(|| self.clone()),
            Formula::True | Formula::False | Formula::Eq(..) => self.clone(),
            Formula::Not(a) => Formula::not(a.map_atoms(rewrite)),
            Formula::And(a, b) => {
                let a = a.map_atoms(rewrite);
                Formula::and(a, b.map_atoms(rewrite))
            }
            Formula::Or(a, b) => {
                let a = a.map_atoms(rewrite);
                Formula::or(a, b.map_atoms(rewrite))
            }
            Formula::Implies(a, b) => {
                let a = a.map_atoms(rewrite);
                Formula::implies(a, b.map_atoms(rewrite))
            }
            Formula::Iff(a, b) => {
                let a = a.map_atoms(rewrite);
                Formula::iff(a, b.map_atoms(rewrite))
            }
            Formula::Forall(v, body) => Formula::forall(v.clone(), body.map_atoms(rewrite)),
            Formula::Exists(v, body) => Formula::exists(v.clone(), body.map_atoms(rewrite)),
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }
}

fn insert_vars(t: &Term, out: &mut BTreeSet<String>) {
    let mut vs = Vec::new();
    t.collect_vars(&mut vs);
    out.extend(vs);
}

pub(crate) fn subst_term(t: &Term, map: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::App(f, args) => {
            Term::App(f.clone(), args.iter().map(|a| subst_term(a, map)).collect())
        }
    }
}

/// `base` if unused, otherwise `base_1`, `base_2`, ... (stripping an
/// existing numeric suffix first).
pub fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    if !used.contains(base) {
        return base.to_string();
    }
    let stem = match base.rsplit_once('_') {
        Some((stem, digits)) if !stem.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) => {
            stem
        }
        _ => base,
    };
    (1..)
        .map(|i| format!("{stem}_{i}"))
        .find(|n| !used.contains(n))
        .expect("unbounded search")
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "$true"),
            Formula::False => write!(f, "$false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Eq(s, t) => write!(f, "{s} = {t}"),
            Formula::Not(a) => match **a {
                Formula::Eq(ref s, ref t) => write!(f, "~({s} = {t})"),
                _ => write!(f, "~{a}"),
            },
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <-> {b})"),
            Formula::Forall(v, body) => write!(f, "forall {v}. {body}"),
            Formula::Exists(v, body) => write!(f, "exists {v}. {body}"),
        }
    }
}
