use std::collections::{BTreeMap, BTreeSet};

use ftl_core::fol::{Atom, Clause, Formula, Term};

/// Predicate and function symbols with arities. Equality is never listed;
/// it is always interpreted as identity.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    pub predicates: BTreeSet<(String, usize)>,
    pub functions: BTreeSet<(String, usize)>,
}

impl Signature {
    pub fn of_formula(f: &Formula) -> Signature {
        let mut s = Signature {
            predicates: f.predicates(),
            functions: f.functions(),
        };
        s.predicates.retain(|(p, n)| !(p == "=" && *n == 2));
        s
    }

    pub fn of_clauses(cs: &[Clause]) -> Signature {
        let mut s = Signature::default();
        for c in cs {
            for l in &c.literals {
                if !l.atom.is_equality() {
                    s.predicates
                        .insert((l.atom.pred.clone(), l.atom.args.len()));
                }
                for t in &l.atom.args {
                    t.collect_functions(&mut s.functions);
                }
            }
        }
        s
    }

    pub fn union(&self, other: &Signature) -> Signature {
        Signature {
            predicates: self.predicates.union(&other.predicates).cloned().collect(),
            functions: self.functions.union(&other.functions).cloned().collect(),
        }
    }
}

/// A finite interpretation over the domain `0..size`. Tables are indexed by
/// the argument tuple read as a base-`size` number, first argument most
/// significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    pub size: usize,
    pub functions: BTreeMap<(String, usize), Vec<usize>>,
    pub predicates: BTreeMap<(String, usize), Vec<bool>>,
}

fn index(size: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * size + a)
}

impl Interpretation {
    pub fn new(size: usize) -> Self {
        Interpretation {
            size,
            functions: BTreeMap::new(),
            predicates: BTreeMap::new(),
        }
    }

    /// Sets `f(args) = value`, creating the table (filled with 0) if needed.
    pub fn set_function(&mut self, f: &str, args: &[usize], value: usize) {
        let size = self.size;
        let table = self
            .functions
            .entry((f.to_string(), args.len()))
            .or_insert_with(|| vec![0; size.pow(args.len() as u32)]);
        table[index(size, args)] = value;
    }

    /// Sets `p(args)`, creating the table (all false) if needed.
    pub fn set_predicate(&mut self, p: &str, args: &[usize], value: bool) {
        let size = self.size;
        let table = self
            .predicates
            .entry((p.to_string(), args.len()))
            .or_insert_with(|| vec![false; size.pow(args.len() as u32)]);
        table[index(size, args)] = value;
    }

    pub fn term(&self, t: &Term, env: &BTreeMap<String, usize>) -> usize {
        match t {
            Term::Var(v) => *env
                .get(v)
                .unwrap_or_else(|| panic!("unassigned variable {v}")),
            Term::App(f, args) => {
                let vals: Vec<usize> = args.iter().map(|a| self.term(a, env)).collect();
                let table = self
                    .functions
                    .get(&(f.clone(), args.len()))
                    .unwrap_or_else(|| panic!("uninterpreted function {f}/{}", args.len()));
                table[index(self.size, &vals)]
            }
        }
    }

    pub fn atom(&self, a: &Atom, env: &BTreeMap<String, usize>) -> bool {
        let vals: Vec<usize> = a.args.iter().map(|t| self.term(t, env)).collect();
        if a.is_equality() {
            return vals[0] == vals[1];
        }
        let table = self
            .predicates
            .get(&(a.pred.clone(), a.args.len()))
            .unwrap_or_else(|| panic!("uninterpreted predicate {}/{}", a.pred, a.args.len()));
        table[index(self.size, &vals)]
    }

    /// Truth of a clause under every assignment of its variables.
    pub fn clause(&self, c: &Clause) -> bool {
        let vars = c.vars();
        every_assignment(self.size, &vars, &mut |env| {
            c.literals
                .iter()
                .any(|l| self.atom(&l.atom, env) == l.positive)
        })
    }
}

/// Runs `f` on every assignment of `vars`; true iff `f` holds for all.
pub fn every_assignment(
    size: usize,
    vars: &[String],
    f: &mut dyn FnMut(&BTreeMap<String, usize>) -> bool,
) -> bool {
    let mut env = BTreeMap::new();
    fn go(
        size: usize,
        vars: &[String],
        env: &mut BTreeMap<String, usize>,
        f: &mut dyn FnMut(&BTreeMap<String, usize>) -> bool,
    ) -> bool {
        match vars.split_first() {
            None => f(env),
            Some((v, rest)) => (0..size).all(|d| {
                env.insert(v.clone(), d);
                go(size, rest, env, f)
            }),
        }
    }
    go(size, vars, &mut env, f)
}

pub fn eval(f: &Formula, m: &Interpretation, env: &mut BTreeMap<String, usize>) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a) => m.atom(a, env),
        Formula::Eq(s, t) => m.term(s, env) == m.term(t, env),
        Formula::Not(a) => !eval(a, m, env),
        Formula::And(a, b) => eval(a, m, env) && eval(b, m, env),
        Formula::Or(a, b) => eval(a, m, env) || eval(b, m, env),
        Formula::Implies(a, b) => !eval(a, m, env) || eval(b, m, env),
        Formula::Iff(a, b) => eval(a, m, env) == eval(b, m, env),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let saved = env.get(v).copied();
            let mut result = universal;
            for d in 0..m.size {
                env.insert(v.clone(), d);
                if eval(body, m, env) != universal {
                    result = !universal;
                    break;
                }
            }
            match saved {
                Some(d) => env.insert(v.clone(), d),
                None => env.remove(v),
            };
            result
        }
    }
}

/// Calls `visit` on every interpretation of `sig` over a domain of `size`
/// elements until it returns false. Returns false iff stopped early.
pub fn for_each_interpretation(
    sig: &Signature,
    size: usize,
    visit: &mut dyn FnMut(&Interpretation) -> bool,
) -> bool {
    // one mixed-radix digit per table cell
    let mut cells: Vec<(bool, (String, usize), usize)> = Vec::new();
    for (f, n) in &sig.functions {
        for i in 0..size.pow(*n as u32) {
            cells.push((true, (f.clone(), *n), i));
        }
    }
    for (p, n) in &sig.predicates {
        for i in 0..size.pow(*n as u32) {
            cells.push((false, (p.clone(), *n), i));
        }
    }
    let mut m = Interpretation::new(size);
    for (f, n) in &sig.functions {
        m.functions
            .insert((f.clone(), *n), vec![0; size.pow(*n as u32)]);
    }
    for (p, n) in &sig.predicates {
        m.predicates
            .insert((p.clone(), *n), vec![false; size.pow(*n as u32)]);
    }
    loop {
        if !visit(&m) {
            return false;
        }
        // increment
        let mut k = 0;
        loop {
            if k == cells.len() {
                return true;
            }
            let (is_fn, key, i) = &cells[k];
            if *is_fn {
                let cell = &mut m.functions.get_mut(key).unwrap()[*i];
                *cell += 1;
                if *cell < size {
                    break;
                }
                *cell = 0;
            } else {
                let cell = &mut m.predicates.get_mut(key).unwrap()[*i];
                *cell = !*cell;
                if *cell {
                    break;
                }
            }
            k += 1;
        }
    }
}

/// Whether the universal closure of `f` has a model with 1..=max_size
/// elements.
pub fn satisfiable(f: &Formula, max_size: usize) -> bool {
    let closed = f.universal_closure();
    let sig = Signature::of_formula(&closed);
    (1..=max_size).any(|n| {
        !for_each_interpretation(&sig, n, &mut |m| !eval(&closed, m, &mut BTreeMap::new()))
    })
}

/// Whether `f` and `g` agree in every interpretation of size 1..=max_size
/// under every assignment of their free variables.
pub fn equivalent(f: &Formula, g: &Formula, max_size: usize) -> bool {
    let sig = Signature::of_formula(f).union(&Signature::of_formula(g));
    let mut vars = f.free_vars();
    for v in g.free_vars() {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    (1..=max_size).all(|n| {
        for_each_interpretation(&sig, n, &mut |m| {
            every_assignment(n, &vars, &mut |env| {
                let mut env = env.clone();
                eval(f, m, &mut env) == eval(g, m, &mut env)
            })
        })
    })
}
