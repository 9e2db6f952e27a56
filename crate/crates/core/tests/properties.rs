use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sspa_core::ctmc::{
    build_generator, numeric_generator, rate_labelled, rate_total, solve_invariant, Measure, RateExpr,
};
use sspa_core::prodform::assemble_product;
use sspa_core::semantics::{canonicalize, Lts};
use sspa_core::syntax::{desugar, format_term, parse_model, parse_term, Label, Prefix, Rate, RateSpec, Term};

fn rate_spec() -> impl Strategy<Value = RateSpec> {
    prop_oneof![
        Just(RateSpec::Passive),
        (1u32..40).prop_map(|k| RateSpec::Const(Rate::new(f64::from(k) * 0.25).unwrap())),
    ]
}

fn label() -> impl Strategy<Value = Label> {
    prop::sample::select(vec!["a", "b", "c"]).prop_map(Label::new)
}

fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::Nil), Just(Term::ident("P")), Just(Term::ident("Q"))];
    leaf.prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            prop::collection::vec((label(), rate_spec(), inner.clone()), 1..4)
                .prop_map(|bs| { Term::Choice(bs.into_iter().map(|(l, r, t)| Prefix::new(l, r, t)).collect()) }),
            (inner, label(), 1u32..9).prop_map(|(t, l, k)| t.closure(l, Rate::new(f64::from(k) * 0.5).unwrap())),
        ]
    })
}

fn shuffle_branches(t: &Term, rng: &mut ChaCha8Rng) -> Term {
    match t {
        Term::Choice(bs) => {
            let mut bs: Vec<Prefix> = bs
                .iter()
                .map(|p| Prefix::new(p.label.clone(), p.rate, shuffle_branches(&p.cont, rng)))
                .collect();
            bs.shuffle(rng);
            Term::Choice(bs)
        }
        Term::Closure(body, l, r) => Term::Closure(Box::new(shuffle_branches(body, rng)), l.clone(), *r),
        other => other.clone(),
    }
}

/// A random closed chain on `n` states written as model text; every state
/// steps to its successor so the chain is irreducible.
fn chain_text(n: usize, extra: &[(usize, usize, u32, usize)]) -> String {
    let mut out = String::new();
    for i in 0..n {
        let mut branches = vec![format!("(s,1.5).S{}", (i + 1) % n)];
        for &(from, to, k, l) in extra {
            if from % n == i {
                branches.push(format!(
                    "({},{}).S{}",
                    ["a", "b", "s"][l % 3],
                    f64::from(k) * 0.5,
                    to % n
                ));
            }
        }
        out.push_str(&format!("S{i} = {};\n", branches.join(" + ")));
    }
    out
}

proptest! {
    #[test]
    fn canonical_form_is_idempotent(t in term()) {
        let c = canonicalize(&t);
        prop_assert_eq!(canonicalize(&c), c);
    }

    #[test]
    fn canonical_form_ignores_branch_order(t in term(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shuffled = shuffle_branches(&t, &mut rng);
        prop_assert_eq!(canonicalize(&shuffled), canonicalize(&t));
    }

    #[test]
    fn printed_terms_parse_back(t in term()) {
        let text = format_term(&t);
        let back = parse_term(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(back, t);
    }

    #[test]
    fn desugared_models_print_and_reparse(t in term()) {
        let text = format!("P = 0; Q = (a,1.0).P; X = {};", format_term(&t));
        let env = desugar(&parse_model(&text).unwrap());
        let printed: String = env
            .equations
            .iter()
            .map(|(n, e)| format!("{n} = {};\n", format_term(&e.term)))
            .collect();
        let again = parse_model(&printed).map_err(|e| TestCaseError::fail(format!("{printed}: {e}")))?;
        for (name, eq) in &env.equations {
            prop_assert_eq!(&again.equations[name].term, &eq.term);
        }
    }

    #[test]
    fn kronecker_product_of_distributions_sums_to_one(
        parts in prop::collection::vec(prop::collection::vec(0.01f64..10.0, 1..5), 1..4)
    ) {
        let measures: Vec<Measure<f64>> = parts
            .iter()
            .map(|v| Measure::new(v.clone(), false).normalize())
            .collect();
        let p = assemble_product(&measures);
        prop_assert_eq!(p.len(), parts.iter().map(Vec::len).product::<usize>());
        prop_assert!((p.total() - 1.0).abs() < 1e-12);
        prop_assert!(p.normalized);
    }

    #[test]
    fn generator_laws(
        n in 2usize..7,
        extra in prop::collection::vec((0usize..7, 0usize..7, 1u32..20, 0usize..3), 0..10)
    ) {
        let env = desugar(&parse_model(&chain_text(n, &extra)).unwrap());
        let lts = Lts::explore(&Term::ident("S0"), &env, 100).unwrap();
        let g = build_generator(&lts);
        let q = numeric_generator::<f64>(&g).unwrap();
        for i in 0..q.rows() {
            let sum: f64 = q.row(i).iter().sum();
            prop_assert!(sum.abs() < 1e-12);
        }
        for i in 0..lts.len() {
            for j in (0..lts.len()).filter(|&j| j != i) {
                let mut by_label = RateExpr::zero();
                for l in ["a", "b", "s"] {
                    by_label += &rate_labelled(&lts, i, j, &Label::new(l));
                }
                prop_assert_eq!(rate_total(&lts, i, j).unwrap(), by_label);
            }
        }
        let s = solve_invariant(&q, true).unwrap();
        prop_assert!(s.residual <= 1e-10 * q.max_abs());
    }
}
