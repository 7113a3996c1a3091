//! Algebraic laws of the substitution module, checked exhaustively on a
//! small variable pool against brute-force oracles, and on random inputs
//! with proptest.

use std::collections::BTreeSet;

use proptest::prelude::*;

use pil_core::{Substitution, Variable};

fn v(name: &str) -> Variable {
    Variable::new(name)
}

fn pool3() -> Vec<Variable> {
    vec![v("a"), v("b"), v("c")]
}

/// Every substitution whose entries only involve the pool: each pool
/// variable is absent or maps to a pool variable.
fn all_substitutions(pool: &[Variable]) -> Vec<Substitution> {
    let mut out = vec![Vec::new()];
    for x in pool {
        let mut next = Vec::new();
        for partial in &out {
            next.push(partial.clone());
            for y in pool {
                let mut with = partial.clone();
                with.push((x.clone(), y.clone()));
                next.push(with);
            }
        }
        out = next;
    }
    let normalized: BTreeSet<Substitution> =
        out.into_iter().map(Substitution::from_pairs).collect();
    normalized.into_iter().collect()
}

/// All total assignments pool → pool.
fn all_assignments(pool: &[Variable]) -> Vec<Vec<(Variable, Variable)>> {
    let mut out = vec![Vec::new()];
    for x in pool {
        let mut next = Vec::new();
        for partial in &out {
            for y in pool {
                let mut with = partial.clone();
                with.push((x.clone(), y.clone()));
                next.push(with);
            }
        }
        out = next;
    }
    out
}

fn satisfies(assignment: &[(Variable, Variable)], s: &Substitution) -> bool {
    let image = |x: &Variable| {
        assignment
            .iter()
            .find(|(k, _)| k == x)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| x.clone())
    };
    s.entries().all(|(x, y)| image(x) == image(y))
}

/// Solution set of a substitution read as equations, over the assignments.
fn solutions(assignments: &[Vec<(Variable, Variable)>], s: &Substitution) -> Vec<usize> {
    assignments
        .iter()
        .enumerate()
        .filter(|(_, a)| satisfies(a, s))
        .map(|(i, _)| i)
        .collect()
}

fn union_constraints(s: &Substitution, t: &Substitution) -> Substitution {
    // Raw union of both entry sets, as one constraint system.
    Substitution::from_pairs(
        s.entries()
            .chain(t.entries())
            .map(|(k, v)| (k.clone(), v.clone())),
    )
}

#[test]
fn join_matches_brute_force_unifier_on_three_variables() {
    let pool = pool3();
    let subs = all_substitutions(&pool);
    let assignments = all_assignments(&pool);
    assert!(subs.len() >= 25, "enumeration unexpectedly small: {}", subs.len());
    for s in &subs {
        for t in &subs {
            let j = s.join(t);
            assert!(j.is_representative_map(), "join not closed: {j}");
            // Same solutions as the union of constraints.
            let want = solutions(&assignments, &union_constraints(s, t));
            let got = solutions(&assignments, &j);
            assert_eq!(got, want, "join {j} of {s} and {t} changed the constraints");
            // Upper bound in the generality order.
            assert!(s.is_more_general(&j), "{s} not more general than {j}");
            assert!(t.is_more_general(&j), "{t} not more general than {j}");
            // Commutative, idempotent.
            assert_eq!(j, t.join(s));
            assert_eq!(s.join(s), s.clone());
            // Sum agrees on disjoint pairs.
            if s.disjoint(t) {
                assert_eq!(s.sum(t).unwrap(), j);
            } else {
                assert!(s.sum(t).is_err());
            }
        }
    }
}

#[test]
fn join_is_associative_on_three_variables() {
    let subs = all_substitutions(&pool3());
    for s in &subs {
        for t in &subs {
            let st = s.join(t);
            for u in &subs {
                assert_eq!(
                    st.join(u),
                    s.join(&t.join(u)),
                    "associativity failed on {s}, {t}, {u}"
                );
            }
        }
    }
}

#[test]
fn generality_matches_brute_force_rho_search() {
    let pool = pool3();
    let subs = all_substitutions(&pool);
    let assignments = all_assignments(&pool);
    for s in &subs {
        for t in &subs {
            // ρ is applied as a raw function: building a Substitution from it
            // would re-read the assignment as equations.
            let witnessed = assignments.iter().any(|rho| {
                let rho_apply = |x: &Variable| {
                    rho.iter()
                        .find(|(k, _)| k == x)
                        .map(|(_, val)| val.clone())
                        .unwrap_or_else(|| x.clone())
                };
                t.domain().all(|x| rho_apply(&s.apply(x)) == t.apply(x))
            });
            assert_eq!(
                s.is_more_general(t),
                witnessed,
                "is_more_general({s}, {t}) disagrees with brute-force search"
            );
        }
    }
}

fn arb_var() -> impl Strategy<Value = Variable> {
    prop::sample::select(vec![v("a"), v("b"), v("c"), v("d"), v("e"), v("f")])
}

fn arb_sub() -> impl Strategy<Value = Substitution> {
    prop::collection::vec((arb_var(), arb_var()), 0..6).prop_map(Substitution::from_pairs)
}

proptest! {
    #[test]
    fn compose_agrees_pointwise(s in arb_sub(), t in arb_sub(), x in arb_var()) {
        prop_assert_eq!(s.compose(&t).apply(&x), s.apply(&t.apply(&x)));
    }

    #[test]
    fn join_laws_hold_randomly(s in arb_sub(), t in arb_sub(), u in arb_sub()) {
        prop_assert_eq!(s.join(&t), t.join(&s));
        prop_assert_eq!(s.join(&t).join(&u), s.join(&t.join(&u)));
        prop_assert_eq!(s.join(&s), s.clone());
        prop_assert_eq!(s.join(&Substitution::empty()), s.clone());
        prop_assert!(s.is_more_general(&s.join(&t)));
        prop_assert!(s.join(&t).is_representative_map());
    }

    #[test]
    fn restrict_only_touches_the_key(s in arb_sub(), x in arb_var()) {
        let r = s.restrict(&x);
        prop_assert!(!r.contains(&x));
        for (k, val) in s.entries() {
            if k != &x {
                prop_assert_eq!(r.get(k), Some(val));
            }
        }
    }

    #[test]
    fn rigid_join_never_renames_rigid(s in arb_sub(), t in arb_sub(), r in arb_var()) {
        let rigid: BTreeSet<Variable> = [r.clone()].into();
        let j = s.join_rigid(&t, &rigid).expect("one rigid variable cannot clash");
        prop_assert_eq!(j.apply(&r), r);
    }
}
