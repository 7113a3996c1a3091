//! Variable-to-variable substitutions (dualizers) and their algebra:
//! composition, restriction, disjoint sum, coherence/join, and the
//! generality order.
//!
//! A substitution is a finite map; lookup outside the domain is the
//! identity. Maps built by [`Substitution::from_pairs`], [`Substitution::sum`]
//! and [`Substitution::join`] are representative maps: every value is a fixed
//! point, so applying twice equals applying once. [`Substitution::compose`]
//! is exact sequential composition, which by design agrees pointwise with
//! "apply `inner`, then `outer`" and therefore may escape the representative
//! form (e.g. composing `{c↦a}` after `{a↦b}` yields `{a↦b, c↦a}`).
//! Identity entries are kept: a variable can be in the domain while mapping
//! to itself, which matters to callers that track domains.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::{Atom, Formula, Variable};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SubstitutionError {
    #[error("substitutions are not disjoint: both touch `{var}`")]
    DomainClash { var: Variable },
    #[error("substitutions are incoherent: rigid variables `{first}` and `{second}` would be identified")]
    Incoherent { first: Variable, second: Variable },
    #[error("not an axiomatic link: {detail}")]
    NotAxiomatic { detail: String },
}

/// Witness maps associate a substitution to each link of a linking.
pub type WitnessMap<L> = BTreeMap<L, Substitution>;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Substitution {
    map: BTreeMap<Variable, Variable>,
}

/// Union-find over variables, used to read substitutions as equational
/// constraints.
struct Classes {
    parent: BTreeMap<Variable, Variable>,
}

impl Classes {
    fn new() -> Classes {
        Classes {
            parent: BTreeMap::new(),
        }
    }

    fn find(&mut self, v: &Variable) -> Variable {
        let p = match self.parent.get(v) {
            None => {
                self.parent.insert(v.clone(), v.clone());
                return v.clone();
            }
            Some(p) => p.clone(),
        };
        if &p == v {
            return p;
        }
        let root = self.find(&p);
        self.parent.insert(v.clone(), root.clone());
        root
    }

    fn union(&mut self, a: &Variable, b: &Variable) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent.insert(ra, rb);
        }
    }

    fn members_by_root(&mut self) -> BTreeMap<Variable, BTreeSet<Variable>> {
        let vars: Vec<Variable> = self.parent.keys().cloned().collect();
        let mut groups: BTreeMap<Variable, BTreeSet<Variable>> = BTreeMap::new();
        for v in vars {
            let root = self.find(&v);
            groups.entry(root).or_default().insert(v);
        }
        groups
    }
}

impl Substitution {
    pub fn empty() -> Substitution {
        Substitution::default()
    }

    /// Build a representative map from equational pairs. Each pair `x ↦ y`
    /// is read as the constraint `x ≈ y`; variables are merged into classes
    /// and each class maps to one representative — the smallest member the
    /// pairs never move (falling back to the smallest member on cycles).
    /// Entries for the representative itself are kept only when it occurs
    /// as a key, so `[(x, x)]` yields the identity entry `{x↦x}`.
    pub fn from_pairs<I>(pairs: I) -> Substitution
    where
        I: IntoIterator<Item = (Variable, Variable)>,
    {
        let pairs: Vec<(Variable, Variable)> = pairs.into_iter().collect();
        let mut classes = Classes::new();
        let mut moved: BTreeSet<Variable> = BTreeSet::new();
        let mut keys: BTreeSet<Variable> = BTreeSet::new();
        for (k, v) in &pairs {
            classes.union(k, v);
            keys.insert(k.clone());
            if k != v {
                moved.insert(k.clone());
            }
        }
        let mut map = BTreeMap::new();
        for (_, members) in classes.members_by_root() {
            let rep = members
                .iter()
                .find(|m| !moved.contains(m))
                .unwrap_or_else(|| members.iter().next().expect("nonempty class"))
                .clone();
            for m in members {
                if m != rep || keys.contains(&m) {
                    map.insert(m, rep.clone());
                }
            }
        }
        Substitution { map }
    }

    pub fn singleton(from: Variable, to: Variable) -> Substitution {
        Substitution::from_pairs([(from, to)])
    }

    /// Record `x` in the domain without constraining it.
    pub fn identity_on(x: Variable) -> Substitution {
        Substitution::singleton(x.clone(), x)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn get(&self, v: &Variable) -> Option<&Variable> {
        self.map.get(v)
    }

    pub fn contains(&self, v: &Variable) -> bool {
        self.map.contains_key(v)
    }

    pub fn domain(&self) -> impl Iterator<Item = &Variable> {
        self.map.keys()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Variable, &Variable)> {
        self.map.iter()
    }

    pub fn as_map(&self) -> &BTreeMap<Variable, Variable> {
        &self.map
    }

    /// All variables an entry touches, as key or value.
    pub fn touched(&self) -> BTreeSet<Variable> {
        self.map
            .iter()
            .flat_map(|(k, v)| [k.clone(), v.clone()])
            .collect()
    }

    pub fn apply(&self, v: &Variable) -> Variable {
        self.map.get(v).cloned().unwrap_or_else(|| v.clone())
    }

    pub fn apply_to_formula(&self, f: &Formula) -> Formula {
        f.substitute(&self.map)
    }

    /// Whether every value is a fixed point (applying twice equals once).
    pub fn is_representative_map(&self) -> bool {
        self.map
            .values()
            .all(|v| self.map.get(v).map_or(true, |w| w == v))
    }

    /// Sequential composition: the result applies `inner` first, then
    /// `self`, and agrees with that pointwise on every variable. The domain
    /// is the union of both domains (identity results are kept).
    pub fn compose(&self, inner: &Substitution) -> Substitution {
        let mut map = BTreeMap::new();
        for x in inner.map.keys().chain(self.map.keys()) {
            map.entry(x.clone())
                .or_insert_with(|| self.apply(&inner.apply(x)));
        }
        Substitution { map }
    }

    /// Remove `x` from the domain; other bindings are untouched.
    pub fn restrict(&self, x: &Variable) -> Substitution {
        let mut map = self.map.clone();
        map.remove(x);
        Substitution { map }
    }

    /// Disjointness: no variable is touched (as key or value) by both.
    pub fn disjoint(&self, other: &Substitution) -> bool {
        self.touched().is_disjoint(&other.touched())
    }

    /// Union of bindings; defined only on disjoint substitutions, where it
    /// coincides with [`Substitution::join`].
    pub fn sum(&self, other: &Substitution) -> Result<Substitution, SubstitutionError> {
        if let Some(var) = self.touched().intersection(&other.touched()).next() {
            return Err(SubstitutionError::DomainClash { var: var.clone() });
        }
        let mut map = self.map.clone();
        map.extend(other.map.iter().map(|(k, v)| (k.clone(), v.clone())));
        Ok(Substitution { map })
    }

    /// The classes each input's entries form, with the input's own
    /// representative for each (the unmoved member of the class, or its
    /// minimum when the entries form a cycle).
    fn own_class_reps(&self) -> Vec<(BTreeSet<Variable>, Variable)> {
        let mut classes = Classes::new();
        for (k, v) in &self.map {
            classes.union(k, v);
        }
        classes
            .members_by_root()
            .into_values()
            .map(|members| {
                let rep = members
                    .iter()
                    .find(|m| self.map.get(*m).map_or(true, |v| v == *m))
                    .unwrap_or_else(|| members.iter().next().expect("nonempty class"))
                    .clone();
                (members, rep)
            })
            .collect()
    }

    fn join_impl(
        &self,
        other: &Substitution,
        rigid: Option<&BTreeSet<Variable>>,
    ) -> Result<Substitution, SubstitutionError> {
        let mut classes = Classes::new();
        for (k, v) in self.map.iter().chain(other.map.iter()) {
            classes.union(k, v);
        }
        // Candidate representatives of a merged class are the inputs' own
        // representatives inside it; taking their minimum makes join
        // associative (a minimum of minima is grouping-independent).
        let mut candidates: BTreeMap<Variable, BTreeSet<Variable>> = BTreeMap::new();
        for input in [self, other] {
            for (members, rep) in input.own_class_reps() {
                let root = classes.find(members.iter().next().expect("nonempty class"));
                candidates.entry(root).or_default().insert(rep);
            }
        }
        let mut map = BTreeMap::new();
        for (root, members) in classes.members_by_root() {
            let rep = match rigid {
                Some(rigid) => {
                    let mut fixed = members.iter().filter(|m| rigid.contains(*m));
                    match (fixed.next(), fixed.next()) {
                        (Some(first), Some(second)) => {
                            return Err(SubstitutionError::Incoherent {
                                first: first.clone(),
                                second: second.clone(),
                            })
                        }
                        (Some(first), None) => first.clone(),
                        (None, _) => candidates[&root].iter().next().expect("candidate").clone(),
                    }
                }
                None => candidates[&root].iter().next().expect("candidate").clone(),
            };
            for m in members {
                if m != rep || self.map.contains_key(&m) || other.map.contains_key(&m) {
                    map.insert(m, rep.clone());
                }
            }
        }
        Ok(Substitution { map })
    }

    /// Whether the union of bindings, read as equations between variables,
    /// is satisfiable. Over pure variables it always is; rigidity is what
    /// introduces clashes (see [`Substitution::coherent_rigid`]).
    pub fn coherent(&self, _other: &Substitution) -> bool {
        true
    }

    /// Coherence when the variables in `rigid` may not be renamed: the
    /// union must not force two distinct rigid variables into one class.
    pub fn coherent_rigid(&self, other: &Substitution, rigid: &BTreeSet<Variable>) -> bool {
        self.join_impl(other, Some(rigid)).is_ok()
    }

    /// Least upper bound in the generality order: merge the two inputs'
    /// classes and map every member to the class representative. On
    /// disjoint inputs this is exactly [`Substitution::sum`].
    pub fn join(&self, other: &Substitution) -> Substitution {
        self.join_impl(other, None).expect("join without rigidity cannot fail")
    }

    /// [`Substitution::join`] under rigidity; errors when two rigid
    /// variables fall into one class. A lone rigid variable becomes its
    /// class representative, so it is never renamed.
    pub fn join_rigid(
        &self,
        other: &Substitution,
        rigid: &BTreeSet<Variable>,
    ) -> Result<Substitution, SubstitutionError> {
        self.join_impl(other, Some(rigid))
    }

    /// True iff some ρ satisfies `compose(ρ, self) = target` pointwise on
    /// `target`'s domain, i.e. ρ(self(x)) = target(x) there. Decided by
    /// matching: the required ρ exists iff it is functional.
    pub fn is_more_general(&self, target: &Substitution) -> bool {
        let mut needed: BTreeMap<Variable, Variable> = BTreeMap::new();
        for (x, tx) in &target.map {
            let sx = self.apply(x);
            match needed.get(&sx) {
                Some(prev) if prev != tx => return false,
                Some(_) => {}
                None => {
                    needed.insert(sx, tx.clone());
                }
            }
        }
        true
    }

    /// The equational class of `x` under this substitution's entries.
    pub fn class_of(&self, x: &Variable) -> BTreeSet<Variable> {
        let mut classes = Classes::new();
        for (k, v) in &self.map {
            classes.union(k, v);
        }
        let root = classes.find(x);
        let mut members: BTreeSet<Variable> = classes
            .members_by_root()
            .remove(&root)
            .unwrap_or_default();
        members.insert(x.clone());
        members
    }

    /// Whether `x`'s class is trivial: no entry identifies it with another
    /// variable.
    pub fn class_trivial(&self, x: &Variable) -> bool {
        self.class_of(x).len() == 1
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}->{v}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<(Variable, Variable)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Variable, Variable)>>(iter: I) -> Substitution {
        Substitution::from_pairs(iter)
    }
}

/// Initial witness of an axiomatic link over formula occurrences: a unit
/// link gets the empty substitution; a `{send x y, recv z t}` pair (in
/// either order) gets `{x↦z, y↦t}`.
pub fn initial_witness(formulas: &[&Formula]) -> Result<Substitution, SubstitutionError> {
    let not_axiomatic = |detail: String| SubstitutionError::NotAxiomatic { detail };
    match formulas {
        [Formula::Atom(Atom::One)] => Ok(Substitution::empty()),
        [a, b] => match (a, b) {
            (Formula::Atom(Atom::Send(x, y)), Formula::Atom(Atom::Recv(z, t)))
            | (Formula::Atom(Atom::Recv(z, t)), Formula::Atom(Atom::Send(x, y))) => Ok(
                Substitution::from_pairs([(x.clone(), z.clone()), (y.clone(), t.clone())]),
            ),
            _ => Err(not_axiomatic(format!(
                "expected dual send/recv atoms, got {a} and {b}"
            ))),
        },
        _ => Err(not_axiomatic(format!(
            "expected one unit or two atoms, got {} formulas",
            formulas.len()
        ))),
    }
}

/// Initial witness of a nominal link: the И-bound variable maps to the
/// Я-bound one.
pub fn nominal_witness(new_var: &Variable, ya_var: &Variable) -> Substitution {
    Substitution::singleton(new_var.clone(), ya_var.clone())
}
