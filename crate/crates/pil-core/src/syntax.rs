//! Formulas, sequents-as-forests, nominal stores and judgements.
//!
//! Sequents keep their display order, but all comparisons treat them as
//! multisets of occurrences; occurrences are identified by [`Position`] paths
//! from the sequent root. Judgements are kept *clean*: every variable is bound
//! at most once, and canonical cleaning numbers binders `x1, x2, ...` in
//! leftmost-outermost order so that α-equivalent judgements clean identically.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// An interned variable name.
///
/// Ordering is "natural": the stem is compared first, then a trailing numeric
/// suffix numerically (so canonical binders `x2 < x10`), then the raw
/// spelling. This single order drives every deterministic choice in the
/// toolkit (map iteration, join representatives, fresh-name supplies).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Variable(Arc<str>);

impl Variable {
    pub fn new(name: impl AsRef<str>) -> Self {
        let name = name.as_ref();
        assert!(!name.is_empty(), "variable names must be nonempty");
        Variable(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// Stem + numeric-suffix view backing the natural order.
    fn sort_key(&self) -> (&str, Option<u64>) {
        let s: &str = &self.0;
        let stem_len = s.len() - s.bytes().rev().take_while(u8::is_ascii_digit).count();
        let (stem, digits) = s.split_at(stem_len);
        (stem, digits.parse().ok())
    }

    /// The `n`-th canonical binder name, `x{n}`.
    pub fn canonical(n: usize) -> Self {
        Variable::new(format!("x{n}"))
    }

    /// A fresh variable (canonical scheme) avoiding `taken`.
    pub fn fresh(taken: &BTreeSet<Variable>) -> Self {
        (1..)
            .map(Variable::canonical)
            .find(|v| !taken.contains(v))
            .expect("unbounded name supply")
    }
}

impl Ord for Variable {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Variable {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<&str> for Variable {
    fn from(s: &str) -> Self {
        Variable::new(s)
    }
}

/// Atomic formulas: the multiplicative unit, sends and receives.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    One,
    Send(Variable, Variable),
    Recv(Variable, Variable),
}

impl Atom {
    pub fn dual(&self) -> Atom {
        match self {
            Atom::One => Atom::One,
            Atom::Send(x, y) => Atom::Recv(x.clone(), y.clone()),
            Atom::Recv(x, y) => Atom::Send(x.clone(), y.clone()),
        }
    }

    pub fn vars(&self) -> Vec<&Variable> {
        match self {
            Atom::One => vec![],
            Atom::Send(x, y) | Atom::Recv(x, y) => vec![x, y],
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::One => write!(f, "one"),
            Atom::Send(x, y) => write!(f, "out {x} {y}"),
            Atom::Recv(x, y) => write!(f, "in {x} {y}"),
        }
    }
}

/// The four quantifiers: first-order `all`/`ex` and the nominals `new`/`ya`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Quantifier {
    Forall,
    Exists,
    New,
    Ya,
}

impl Quantifier {
    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Forall => Quantifier::Exists,
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::New => Quantifier::Ya,
            Quantifier::Ya => Quantifier::New,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Forall => "all",
            Quantifier::Exists => "ex",
            Quantifier::New => "new",
            Quantifier::Ya => "ya",
        }
    }
}

/// Binary connectives. `Prec` is non-commutative and non-associative; no
/// normalizer may reassociate it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Connective {
    Par,
    Tensor,
    Prec,
    Plus,
    With,
}

impl Connective {
    pub fn dual(self) -> Connective {
        match self {
            Connective::Par => Connective::Tensor,
            Connective::Tensor => Connective::Par,
            Connective::Prec => Connective::Prec,
            Connective::Plus => Connective::With,
            Connective::With => Connective::Plus,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Connective::Par => "par",
            Connective::Tensor => "ten",
            Connective::Prec => "seq",
            Connective::Plus => "plus",
            Connective::With => "with",
        }
    }
}

/// Formula trees over atoms, binary connectives and quantifiers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Atom(Atom),
    Bin(Connective, Box<Formula>, Box<Formula>),
    Quant(Quantifier, Variable, Box<Formula>),
}

impl Formula {
    pub fn one() -> Formula {
        Formula::Atom(Atom::One)
    }
    pub fn send(x: impl Into<Variable>, y: impl Into<Variable>) -> Formula {
        Formula::Atom(Atom::Send(x.into(), y.into()))
    }
    pub fn recv(x: impl Into<Variable>, y: impl Into<Variable>) -> Formula {
        Formula::Atom(Atom::Recv(x.into(), y.into()))
    }
    pub fn par(a: Formula, b: Formula) -> Formula {
        Formula::Bin(Connective::Par, Box::new(a), Box::new(b))
    }
    pub fn tensor(a: Formula, b: Formula) -> Formula {
        Formula::Bin(Connective::Tensor, Box::new(a), Box::new(b))
    }
    pub fn prec(a: Formula, b: Formula) -> Formula {
        Formula::Bin(Connective::Prec, Box::new(a), Box::new(b))
    }
    pub fn plus(a: Formula, b: Formula) -> Formula {
        Formula::Bin(Connective::Plus, Box::new(a), Box::new(b))
    }
    pub fn with(a: Formula, b: Formula) -> Formula {
        Formula::Bin(Connective::With, Box::new(a), Box::new(b))
    }
    pub fn forall(x: impl Into<Variable>, a: Formula) -> Formula {
        Formula::Quant(Quantifier::Forall, x.into(), Box::new(a))
    }
    pub fn exists(x: impl Into<Variable>, a: Formula) -> Formula {
        Formula::Quant(Quantifier::Exists, x.into(), Box::new(a))
    }
    pub fn new_q(x: impl Into<Variable>, a: Formula) -> Formula {
        Formula::Quant(Quantifier::New, x.into(), Box::new(a))
    }
    pub fn ya_q(x: impl Into<Variable>, a: Formula) -> Formula {
        Formula::Quant(Quantifier::Ya, x.into(), Box::new(a))
    }

    /// Children in position order (binary: two, quantifier: one, atom: none).
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) => vec![],
            Formula::Bin(_, a, b) => vec![a, b],
            Formula::Quant(_, _, a) => vec![a],
        }
    }

    pub fn child(&self, i: usize) -> Option<&Formula> {
        self.children().into_iter().nth(i)
    }

    /// De Morgan negation; involutive, `seq` is self-dual.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(a.dual()),
            Formula::Bin(c, a, b) => {
                Formula::Bin(c.dual(), Box::new(a.negate()), Box::new(b.negate()))
            }
            Formula::Quant(q, x, a) => Formula::Quant(q.dual(), x.clone(), Box::new(a.negate())),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Variable>, out: &mut BTreeSet<Variable>) {
        match self {
            Formula::Atom(a) => {
                for v in a.vars() {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
            Formula::Bin(_, a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Quant(_, x, a) => {
                bound.push(x.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// All variables occurring anywhere (free, bound, binders).
    pub fn all_vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_all(&mut out);
        out
    }

    fn collect_all(&self, out: &mut BTreeSet<Variable>) {
        match self {
            Formula::Atom(a) => out.extend(a.vars().into_iter().cloned()),
            Formula::Bin(_, a, b) => {
                a.collect_all(out);
                b.collect_all(out);
            }
            Formula::Quant(_, x, a) => {
                out.insert(x.clone());
                a.collect_all(out);
            }
        }
    }

    /// Capture-avoiding substitution of variables for free variables. Binders
    /// clashing with a substituted name are renamed on the fly.
    pub fn substitute(&self, map: &BTreeMap<Variable, Variable>) -> Formula {
        if map.is_empty() {
            return self.clone();
        }
        self.subst_in(map)
    }

    /// `self[y/x]`: replace free occurrences of `x` by `y`.
    pub fn rename_free(&self, x: &Variable, y: &Variable) -> Formula {
        if x == y {
            return self.clone();
        }
        let mut map = BTreeMap::new();
        map.insert(x.clone(), y.clone());
        self.subst_in(&map)
    }

    fn subst_in(&self, map: &BTreeMap<Variable, Variable>) -> Formula {
        match self {
            Formula::Atom(a) => {
                let r = |v: &Variable| map.get(v).cloned().unwrap_or_else(|| v.clone());
                Formula::Atom(match a {
                    Atom::One => Atom::One,
                    Atom::Send(x, y) => Atom::Send(r(x), r(y)),
                    Atom::Recv(x, y) => Atom::Recv(r(x), r(y)),
                })
            }
            Formula::Bin(c, a, b) => {
                Formula::Bin(*c, Box::new(a.subst_in(map)), Box::new(b.subst_in(map)))
            }
            Formula::Quant(q, x, a) => {
                let mut inner: BTreeMap<Variable, Variable> = map
                    .iter()
                    .filter(|(k, _)| *k != x)
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect();
                // Freshen the binder if a substituted value would be captured.
                let captures = inner
                    .iter()
                    .any(|(k, v)| v == x && a.free_vars().contains(k));
                let (x, a) = if captures {
                    let mut taken = a.all_vars();
                    taken.extend(inner.values().cloned());
                    taken.extend(inner.keys().cloned());
                    taken.insert(x.clone());
                    let fresh = Variable::fresh(&taken);
                    let renamed = {
                        let mut m = BTreeMap::new();
                        m.insert(x.clone(), fresh.clone());
                        a.subst_in(&m)
                    };
                    (fresh, renamed)
                } else {
                    (x.clone(), a.as_ref().clone())
                };
                if inner.is_empty() {
                    Formula::Quant(*q, x, Box::new(a))
                } else {
                    inner.retain(|k, _| a.free_vars().contains(k));
                    Formula::Quant(*q, x, Box::new(a.subst_in(&inner)))
                }
            }
        }
    }

    /// α-equivalence: equality after consistent bound-variable renaming.
    pub fn alpha_equal(&self, other: &Formula) -> bool {
        self.debruijn_key() == other.debruijn_key()
    }

    /// α-invariant structural key: bound occurrences by binder index, free
    /// names literal. Used for canonical sequent ordering and memoization.
    pub fn debruijn_key(&self) -> String {
        let mut s = String::new();
        self.db_render(&mut Vec::new(), &mut s);
        s
    }

    fn db_render(&self, env: &mut Vec<Variable>, out: &mut String) {
        let var = |v: &Variable, env: &Vec<Variable>, out: &mut String| {
            match env.iter().rposition(|b| b == v) {
                Some(i) => out.push_str(&format!("#{}", env.len() - 1 - i)),
                None => out.push_str(v.name()),
            }
        };
        match self {
            Formula::Atom(Atom::One) => out.push_str("one"),
            Formula::Atom(Atom::Send(x, y)) => {
                out.push_str("out ");
                var(x, env, out);
                out.push(' ');
                var(y, env, out);
            }
            Formula::Atom(Atom::Recv(x, y)) => {
                out.push_str("in ");
                var(x, env, out);
                out.push(' ');
                var(y, env, out);
            }
            Formula::Bin(c, a, b) => {
                out.push('(');
                a.db_render(env, out);
                out.push(' ');
                out.push_str(c.keyword());
                out.push(' ');
                b.db_render(env, out);
                out.push(')');
            }
            Formula::Quant(q, x, a) => {
                out.push_str(q.keyword());
                out.push_str(". ");
                env.push(x.clone());
                a.db_render(env, out);
                env.pop();
            }
        }
    }

    /// Node count (atoms, connectives and quantifiers).
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Bin(_, a, b) => 1 + a.size() + b.size(),
            Formula::Quant(_, _, a) => 1 + a.size(),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Bin(c, a, b) => write!(f, "({a} {} {b})", c.keyword()),
            Formula::Quant(q, x, a) => write!(f, "{} {x}. {a}", q.keyword()),
        }
    }
}

/// Occurrence identity: a path of child indices from the sequent root. The
/// first component indexes the formula in the sequent, the rest descend
/// through the formula tree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Position(Vec<usize>);

impl Position {
    pub fn root(index: usize) -> Position {
        Position(vec![index])
    }

    pub fn from_path(path: Vec<usize>) -> Position {
        assert!(!path.is_empty(), "positions start at a sequent root");
        Position(path)
    }

    pub fn path(&self) -> &[usize] {
        &self.0
    }

    pub fn root_index(&self) -> usize {
        self.0[0]
    }

    pub fn child(&self, i: usize) -> Position {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }

    pub fn parent(&self) -> Option<Position> {
        if self.0.len() > 1 {
            Some(Position(self.0[..self.0.len() - 1].to_vec()))
        } else {
            None
        }
    }

    pub fn is_root(&self) -> bool {
        self.0.len() == 1
    }

    /// Whether `self` is `other` or an ancestor of it.
    pub fn contains(&self, other: &Position) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// Replace the root-index component.
    pub fn with_root(&self, index: usize) -> Position {
        let mut p = self.0.clone();
        p[0] = index;
        Position(p)
    }

    /// Re-root `self` (which must lie under a length-1 root) below `prefix`.
    pub fn reroot(&self, prefix: &Position) -> Position {
        let mut p = prefix.0.clone();
        p.extend_from_slice(&self.0[1..]);
        Position(p)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PositionError {
    #[error("position {0} does not resolve in the sequent")]
    Dangling(Position),
}

/// The two nominal sorts.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum NomSort {
    New,
    Ya,
}

impl NomSort {
    pub fn dual(self) -> NomSort {
        match self {
            NomSort::New => NomSort::Ya,
            NomSort::Ya => NomSort::New,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            NomSort::New => "new",
            NomSort::Ya => "ya",
        }
    }

    pub fn quantifier(self) -> Quantifier {
        match self {
            NomSort::New => Quantifier::New,
            NomSort::Ya => Quantifier::Ya,
        }
    }
}

impl fmt::Display for NomSort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StoreError {
    #[error("variable {0} already occurs in the store")]
    Duplicate(Variable),
}

/// A nominal store: a set of sorted variables, each occurring at most once.
/// A nominal store: a set of sorted nominal variables. Ordinarily each
/// variable occurs at most once ([`Store::is_strict`]); during
/// cut-elimination the auxiliary store-cut rule temporarily holds the dual
/// pair (И x, Я x), inserted via [`Store::insert_dual_pair`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Store(BTreeSet<(Variable, NomSort)>);

impl Store {
    pub fn empty() -> Store {
        Store::default()
    }

    pub fn from_entries(
        entries: impl IntoIterator<Item = (NomSort, Variable)>,
    ) -> Result<Store, StoreError> {
        let mut s = Store::empty();
        for (sort, v) in entries {
            s.insert(sort, v)?;
        }
        Ok(s)
    }

    /// Strict insert: the variable must not occur yet, in either sort.
    pub fn insert(&mut self, sort: NomSort, v: Variable) -> Result<(), StoreError> {
        if self.occurs(&v) {
            return Err(StoreError::Duplicate(v));
        }
        self.0.insert((v, sort));
        Ok(())
    }

    /// Add both И x and Я x; the variable must not occur yet.
    pub fn insert_dual_pair(&mut self, v: Variable) -> Result<(), StoreError> {
        if self.occurs(&v) {
            return Err(StoreError::Duplicate(v));
        }
        self.0.insert((v.clone(), NomSort::New));
        self.0.insert((v, NomSort::Ya));
        Ok(())
    }

    /// Remove the exact entry (sort, v); reports whether it was present.
    pub fn remove(&mut self, sort: NomSort, v: &Variable) -> bool {
        self.0.remove(&(v.clone(), sort))
    }

    pub fn has(&self, sort: NomSort, v: &Variable) -> bool {
        self.0.contains(&(v.clone(), sort))
    }

    /// Whether the variable occurs in the store, in either sort.
    pub fn occurs(&self, v: &Variable) -> bool {
        self.has(NomSort::New, v) || self.has(NomSort::Ya, v)
    }

    /// Whether every variable occurs at most once.
    pub fn is_strict(&self) -> bool {
        self.0
            .iter()
            .all(|(v, s)| !self.0.contains(&(v.clone(), s.dual())))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// The distinct variables occurring in the store.
    pub fn vars(&self) -> impl Iterator<Item = &Variable> {
        let mut last: Option<&Variable> = None;
        self.0.iter().filter_map(move |(v, _)| {
            if last == Some(v) {
                None
            } else {
                last = Some(v);
                Some(v)
            }
        })
    }

    /// Entries in (sort, variable) form, sorted by variable then sort.
    pub fn entries(&self) -> impl Iterator<Item = (NomSort, &Variable)> {
        self.0.iter().map(|(v, s)| (*s, v))
    }

    pub fn union_disjoint(&self, other: &Store) -> Result<Store, StoreError> {
        let mut s = self.clone();
        for (sort, v) in other.entries() {
            if s.has(sort, v) {
                return Err(StoreError::Duplicate(v.clone()));
            }
            s.0.insert((v.clone(), sort));
        }
        Ok(s)
    }

    /// Split off the entries whose variables are in `vars`; `None` if some
    /// requested variable is absent.
    pub fn split(&self, vars: &BTreeSet<Variable>) -> Option<(Store, Store)> {
        let mut left = Store::empty();
        let mut right = Store::empty();
        for (v, sort) in &self.0 {
            let target = if vars.contains(v) { &mut left } else { &mut right };
            target.0.insert((v.clone(), *sort));
        }
        if vars.iter().all(|v| left.occurs(v)) {
            Some((left, right))
        } else {
            None
        }
    }
}

impl fmt::Display for Store {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries()
            .map(|(s, v)| format!("{}:{v}", s.keyword()))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// An ordered sequence of formula occurrences. Display order is preserved;
/// comparisons are multiset-like via [`Judgement::canonical_key`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Sequent(pub Vec<Formula>);

impl Sequent {
    pub fn new(formulas: Vec<Formula>) -> Sequent {
        Sequent(formulas)
    }

    pub fn singleton(f: Formula) -> Sequent {
        Sequent(vec![f])
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn subformula_at(&self, p: &Position) -> Result<&Formula, PositionError> {
        let mut node = self
            .0
            .get(p.root_index())
            .ok_or_else(|| PositionError::Dangling(p.clone()))?;
        for &i in &p.path()[1..] {
            node = node
                .child(i)
                .ok_or_else(|| PositionError::Dangling(p.clone()))?;
        }
        Ok(node)
    }

    pub fn root_positions(&self) -> Vec<Position> {
        (0..self.0.len()).map(Position::root).collect()
    }

    /// Every occurrence position, in DFS order.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        for (i, f) in self.0.iter().enumerate() {
            let mut stack = vec![(Position::root(i), f)];
            while let Some((p, node)) = stack.pop() {
                out.push(p.clone());
                for (j, c) in node.children().into_iter().enumerate().rev() {
                    stack.push((p.child(j), c));
                }
            }
        }
        out
    }

    pub fn free_vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        for f in &self.0 {
            out.extend(f.free_vars());
        }
        out
    }

    /// Multiset equality (exact, not modulo α).
    pub fn multiset_eq(&self, other: &Sequent) -> bool {
        let mut a = self.0.clone();
        let mut b = other.0.clone();
        a.sort();
        b.sort();
        a == b
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// A nominal store paired with a sequent: the objects the sequent rules act on.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Judgement {
    pub store: Store,
    pub sequent: Sequent,
}

impl Judgement {
    pub fn new(store: Store, sequent: Sequent) -> Judgement {
        Judgement { store, sequent }
    }

    pub fn from_sequent(sequent: Sequent) -> Judgement {
        Judgement {
            store: Store::empty(),
            sequent,
        }
    }

    /// Free variables of the sequent plus the store's variables.
    pub fn free_vars(&self) -> BTreeSet<Variable> {
        let mut out = self.sequent.free_vars();
        out.extend(self.store.vars().cloned());
        out
    }

    /// Canonical cleaning: α-rename binders to `x1, x2, ...` in
    /// leftmost-outermost order, skipping names free in the judgement, so that
    /// every variable is bound at most once and α-equivalent judgements (same
    /// formula order) clean identically. Idempotent.
    pub fn clean(&self) -> Judgement {
        let reserved = self.free_vars();
        let mut counter = 1usize;
        let mut next_name = move |reserved: &BTreeSet<Variable>| loop {
            let candidate = Variable::canonical(counter);
            counter += 1;
            if !reserved.contains(&candidate) {
                return candidate;
            }
        };
        let formulas = self
            .sequent
            .0
            .iter()
            .map(|f| clean_formula(f, &mut Vec::new(), &reserved, &mut next_name))
            .collect();
        Judgement {
            store: self.store.clone(),
            sequent: Sequent(formulas),
        }
    }

    /// Cleanness validator: binder variables pairwise distinct and disjoint
    /// from the judgement's free variables and store.
    pub fn is_clean(&self) -> bool {
        let mut binders = BTreeSet::new();
        let free = self.free_vars();
        for f in &self.sequent.0 {
            if !collect_binders(f, &mut binders) {
                return false;
            }
        }
        binders.is_disjoint(&free)
    }

    /// Order-insensitive, α-insensitive canonical form: formulas sorted by
    /// their α-invariant key, then canonically cleaned.
    pub fn canonical(&self) -> Judgement {
        let mut formulas = self.sequent.0.clone();
        formulas.sort_by(|a, b| {
            a.debruijn_key()
                .cmp(&b.debruijn_key())
                .then_with(|| a.cmp(b))
        });
        Judgement {
            store: self.store.clone(),
            sequent: Sequent(formulas),
        }
        .clean()
    }

    /// Canonical key for memoization and multiset-modulo-α comparison.
    pub fn canonical_key(&self) -> String {
        self.canonical().to_string()
    }

    /// Judgement equality as used by the kernel: store equal, sequents equal
    /// as multisets of α-equivalence classes.
    pub fn same_judgement(&self, other: &Judgement) -> bool {
        self.store == other.store && self.canonical_key() == other.canonical_key()
    }
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.store.is_empty() {
            write!(f, "|- {}", self.sequent)
        } else {
            write!(f, "[{}] |- {}", self.store, self.sequent)
        }
    }
}

fn clean_formula(
    f: &Formula,
    env: &mut Vec<(Variable, Variable)>,
    reserved: &BTreeSet<Variable>,
    next_name: &mut impl FnMut(&BTreeSet<Variable>) -> Variable,
) -> Formula {
    match f {
        Formula::Atom(a) => {
            let r = |v: &Variable| {
                env.iter()
                    .rev()
                    .find(|(old, _)| old == v)
                    .map(|(_, new)| new.clone())
                    .unwrap_or_else(|| v.clone())
            };
            Formula::Atom(match a {
                Atom::One => Atom::One,
                Atom::Send(x, y) => Atom::Send(r(x), r(y)),
                Atom::Recv(x, y) => Atom::Recv(r(x), r(y)),
            })
        }
        Formula::Bin(c, a, b) => Formula::Bin(
            *c,
            Box::new(clean_formula(a, env, reserved, next_name)),
            Box::new(clean_formula(b, env, reserved, next_name)),
        ),
        Formula::Quant(q, x, a) => {
            let fresh = next_name(reserved);
            env.push((x.clone(), fresh.clone()));
            let body = clean_formula(a, env, reserved, next_name);
            env.pop();
            Formula::Quant(*q, fresh, Box::new(body))
        }
    }
}

fn collect_binders(f: &Formula, binders: &mut BTreeSet<Variable>) -> bool {
    match f {
        Formula::Atom(_) => true,
        Formula::Bin(_, a, b) => collect_binders(a, binders) && collect_binders(b, binders),
        Formula::Quant(_, x, a) => binders.insert(x.clone()) && collect_binders(a, binders),
    }
}

/// A formula with exactly one hole, plugged by [`Context::plug`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Context {
    skeleton: Formula,
    hole: Vec<usize>,
}

impl Context {
    /// Carve a context out of `f` by removing the subformula at `path`
    /// (a path of child indices within the formula). Returns the context and
    /// the removed subformula.
    pub fn carve(f: &Formula, path: &[usize]) -> Option<(Context, Formula)> {
        let mut node = f;
        for &i in path {
            node = node.child(i)?;
        }
        Some((
            Context {
                skeleton: f.clone(),
                hole: path.to_vec(),
            },
            node.clone(),
        ))
    }

    pub fn hole_path(&self) -> &[usize] {
        &self.hole
    }

    pub fn plug(&self, filler: Formula) -> Formula {
        fn go(node: &Formula, path: &[usize], filler: Formula) -> Formula {
            match path.split_first() {
                None => filler,
                Some((&i, rest)) => match node {
                    Formula::Bin(c, a, b) => {
                        if i == 0 {
                            Formula::Bin(*c, Box::new(go(a, rest, filler)), b.clone())
                        } else {
                            Formula::Bin(*c, a.clone(), Box::new(go(b, rest, filler)))
                        }
                    }
                    Formula::Quant(q, x, a) => {
                        Formula::Quant(*q, x.clone(), Box::new(go(a, rest, filler)))
                    }
                    Formula::Atom(_) => unreachable!("hole path validated at construction"),
                },
            }
        }
        go(&self.skeleton, &self.hole, filler)
    }
}
