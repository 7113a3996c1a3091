//! Structural invariants of formulas, judgements, and the text grammar,
//! on randomly generated formulas.

use proptest::prelude::*;

use pil_core::{
    parse_formula, Connective, Formula, Judgement, Quantifier, Sequent, Store, Variable,
};

fn v(name: &str) -> Variable {
    Variable::new(name)
}

fn arb_var() -> impl Strategy<Value = Variable> {
    prop::sample::select(vec![v("a"), v("b"), v("c"), v("x"), v("y")])
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::one()),
        (arb_var(), arb_var()).prop_map(|(x, y)| Formula::send(x, y)),
        (arb_var(), arb_var()).prop_map(|(x, y)| Formula::recv(x, y)),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (
                prop::sample::select(vec![
                    Connective::Par,
                    Connective::Tensor,
                    Connective::Prec,
                    Connective::Plus,
                    Connective::With,
                ]),
                inner.clone(),
                inner.clone()
            )
                .prop_map(|(c, a, b)| Formula::Bin(c, Box::new(a), Box::new(b))),
            (
                prop::sample::select(vec![
                    Quantifier::Forall,
                    Quantifier::Exists,
                    Quantifier::New,
                    Quantifier::Ya,
                ]),
                arb_var(),
                inner
            )
                .prop_map(|(q, x, a)| Formula::Quant(q, x, Box::new(a))),
        ]
    })
}

/// Rename every binder to a fresh `w{i}` name, bottom-up: an α-variant.
fn alpha_variant(f: &Formula, counter: &mut usize) -> Formula {
    match f {
        Formula::Atom(_) => f.clone(),
        Formula::Bin(c, a, b) => Formula::Bin(
            *c,
            Box::new(alpha_variant(a, counter)),
            Box::new(alpha_variant(b, counter)),
        ),
        Formula::Quant(q, x, a) => {
            let body = alpha_variant(a, counter);
            *counter += 1;
            let nx = v(&format!("w{counter}"));
            let renamed = body.rename_free(x, &nx);
            Formula::Quant(*q, nx, Box::new(renamed))
        }
    }
}

fn judgement_of(formulas: Vec<Formula>) -> Judgement {
    Judgement::new(Store::empty(), Sequent::new(formulas))
}

proptest! {
    #[test]
    fn display_parse_roundtrip(f in arb_formula()) {
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn negation_is_involutive(f in arb_formula()) {
        prop_assert_eq!(f.negate().negate(), f.clone());
        prop_assert_eq!(f.negate().free_vars(), f.free_vars());
    }

    #[test]
    fn clean_is_idempotent_and_clean(f in arb_formula(), g in arb_formula()) {
        let j = judgement_of(vec![f, g]);
        let c = j.clean();
        prop_assert!(c.is_clean());
        prop_assert_eq!(c.clean(), c.clone());
        prop_assert_eq!(c.free_vars(), j.free_vars());
        for (a, b) in j.sequent.0.iter().zip(c.sequent.0.iter()) {
            prop_assert!(a.alpha_equal(b));
        }
    }

    #[test]
    fn canonical_key_ignores_alpha_and_order(f in arb_formula(), g in arb_formula()) {
        let j = judgement_of(vec![f.clone(), g.clone()]);
        let mut counter = 0;
        let variants = vec![alpha_variant(&g, &mut counter), alpha_variant(&f, &mut counter)];
        let j2 = judgement_of(variants);
        prop_assert_eq!(j.canonical_key(), j2.canonical_key());
        prop_assert!(j.same_judgement(&j2));
    }

    #[test]
    fn positions_resolve(f in arb_formula()) {
        let s = Sequent::new(vec![f]);
        for p in s.positions() {
            prop_assert!(s.subformula_at(&p).is_ok());
        }
    }

    #[test]
    fn rename_free_roundtrip(f in arb_formula()) {
        let fresh = v("q9");
        let x = v("x");
        let there = f.rename_free(&x, &fresh);
        prop_assert!(!there.free_vars().contains(&x));
        let back = there.rename_free(&fresh, &x);
        prop_assert!(back.alpha_equal(&f));
    }
}
