use proptest::prelude::*;

use gamma_ops::{
    CoeffElem, DiffOp, ExpMonomial, FieldScalar, LaurentPoly, MatrixDiffOp, ProjPoint,
};
use gamma_ops_cli::emit::{parse_json, to_json, OperatorDoc};
use gamma_ops_cli::{parse_session, SessionConfig};

fn scalar() -> impl Strategy<Value = FieldScalar> {
    (-6i64..=6, 1i64..=5, -3i64..=3, prop::bool::ANY).prop_map(|(p, q, b, surd)| {
        let a = FieldScalar::frac(p, q);
        if surd && b != 0 {
            &a + &(&FieldScalar::sqrt_of(2) * &FieldScalar::from_int(b))
        } else {
            a
        }
    })
}

fn rational() -> impl Strategy<Value = FieldScalar> {
    (-6i64..=6, 1i64..=5).prop_map(|(p, q)| FieldScalar::frac(p, q))
}

fn point() -> impl Strategy<Value = ProjPoint> {
    (scalar(), prop::bool::ANY).prop_map(|(a, inf)| {
        if inf {
            ProjPoint::infinity()
        } else {
            ProjPoint::affine(a)
        }
    })
}

fn coeffs() -> impl Strategy<Value = [FieldScalar; 4]> {
    [scalar(), scalar(), scalar(), scalar()]
        .prop_filter("nonzero form", |c| c.iter().any(|x| !x.is_zero()))
}

fn config() -> impl Strategy<Value = SessionConfig> {
    (
        point(),
        point(),
        proptest::option::of(rational().prop_filter("nonzero", |a| !a.is_zero())),
        coeffs(),
        prop::collection::vec(coeffs(), 0..3),
        prop::bool::ANY,
    )
        .prop_filter("distinct points", |(p1, p2, ..)| p1 != p2)
        .prop_map(
            |(p1, p2, factor, section, flow_preferences, ext)| SessionConfig {
                p1,
                p2,
                factor,
                section,
                flow_preferences,
                extension: ext.then_some(2),
            },
        )
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(((-3i64..=3, -3i64..=3, 1i64..=2), scalar()), 1..4).prop_map(|terms| {
        LaurentPoly::from_terms(terms.into_iter().map(|((x, y, q), c)| {
            (
                ExpMonomial::new(
                    num_rational::Rational64::new(x, q),
                    num_rational::Rational64::new(y, q),
                ),
                c,
            )
        }))
    })
}

fn coeff() -> impl Strategy<Value = CoeffElem> {
    (poly(), poly())
        .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
        .prop_map(|(n, d)| CoeffElem::new(n, d).unwrap())
}

fn entry() -> impl Strategy<Value = DiffOp> {
    prop::collection::vec(((0u32..3, 0u32..3), coeff()), 0..3).prop_map(DiffOp::from_terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn session_round_trip(cfg in config()) {
        let back = parse_session(&cfg.to_toml()).unwrap();
        prop_assert_eq!(back, cfg);
    }

    #[test]
    fn operator_json_round_trip(e in [entry(), entry(), entry(), entry()]) {
        let [a, b, c, d] = e;
        let m = MatrixDiffOp::new([[a, b], [c, d]]);
        let back = parse_json(&to_json(&OperatorDoc::new(&m))).unwrap().operator().unwrap();
        prop_assert_eq!(back, m);
    }
}
