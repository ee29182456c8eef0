use gamma_ops::*;

fn session() -> Session {
    let gluing = GluingData::new(
        ProjPoint::from_ints(1, 0).unwrap(),
        ProjPoint::from_ints(0, 1).unwrap(),
        FieldScalar::one(),
    )
    .unwrap();
    let f = |s: &str| parse_biform(s, 1).unwrap();
    Session::new(
        gluing,
        f("z1*z2 + z1*w2 + w1*w2"),
        f("z1*z2 + 2*w1*z2 - w1*w2"),
        f("-z1*z2 + 2*w1*z2 + w1*w2"),
        None,
    )
    .unwrap()
}

fn function(s: &Session, g: &str, m: usize) -> FunctionOnGamma {
    validate_function(parse_biform(g, m).unwrap(), s).unwrap()
}

#[test]
fn explicit_session_matches_resolved_one() {
    let s = session();
    assert_eq!(s.flow(1).c, FieldScalar::one());
    assert_eq!(s.flow(2).c, FieldScalar::from_int(-1));
    assert_eq!(s.twist(), &ExpMonomial::int(-1, 1));
}

#[test]
fn second_basis_element_has_printed_numerator() {
    let s = session();
    let b = default_basis(&s).unwrap();
    assert_eq!(b.h1(), &parse_biform("w1 z2", 1).unwrap());
    let h2 = parse_biform("e^(y-x) z1 z2 + z1 w2 + e^(x-y) w1 w2", 1).unwrap();
    assert_eq!(b.h2(), &h2);
}

#[test]
fn homomorphism_for_mixed_pairs() {
    let s = session();
    let b = default_basis(&s).unwrap();
    let l1 = function(&s, "w1 z2", 1);
    for (g, m) in [
        ("z1 w1 z2^2", 2),
        ("z1 z2 w1 w2", 2),
        ("z1 w1 w2^2 + z1^2 z2 w2", 2),
    ] {
        let l = function(&s, g, m);
        assert!(verify_homomorphism(&l1, &l, &b, &s).unwrap(), "{g}");
        assert!(verify_homomorphism(&l, &l1, &b, &s).unwrap(), "{g}");
    }
}

#[test]
fn solution_is_unique_under_perturbation() {
    // adding any nonzero operator to one entry breaks the eigen relation
    let s = session();
    let b = default_basis(&s).unwrap();
    let l = function(&s, "z1 z2 w1 w2", 2);
    let a = SpectralAssignment::solve(l, b, &s).unwrap();
    for (i, j) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
        for bump in [
            DiffOp::identity(),
            DiffOp::dx(),
            DiffOp::term(1, 1, CoeffElem::u()),
        ] {
            let mut p = a.clone();
            p.operator.e[i][j] = &p.operator.e[i][j] + &bump;
            assert!(!verify_eigen(&p, &s).unwrap());
        }
    }
}

#[test]
fn functions_not_on_the_surface_are_rejected() {
    let s = session();
    let b = default_basis(&s).unwrap();
    assert_eq!(
        validate_function(parse_biform("z1 w2", 1).unwrap(), &s),
        Err(Error::NotAFunctionOnGamma)
    );
    // a valid function of pole order 3 still yields a commuting operator
    let l = function(&s, "w1 z2", 1);
    let cube = l.mul(&l).mul(&l);
    let d3 = construct_operator(&cube, &b, &s).unwrap();
    let d1 = construct_operator(&l, &b, &s).unwrap();
    assert!(verify_commute_pair(&d1, &d3));
    assert_eq!(d3, d1.compose(&d1).compose(&d1));
}

#[test]
fn other_gluing_factor() {
    // α = Aβ, β = Aδ with A = 2
    let gluing = GluingData::new(
        ProjPoint::from_ints(1, 0).unwrap(),
        ProjPoint::from_ints(0, 1).unwrap(),
        FieldScalar::from_int(2),
    )
    .unwrap();
    let f = parse_biform("4*z1*z2 + 2*z1*w2 + 5*w1*z2 + w1*w2", 1).unwrap();
    let s = Session::resolve(gluing, f, &[], None).unwrap();
    for n in 1..=3 {
        assert_eq!(rank_m(n, &s), n * (n + 1));
    }
    let b = default_basis(&s).unwrap();
    // w1 z2 vanishes on both glued lines, so it descends for any A
    let l = validate_function(parse_biform("w1 z2", 1).unwrap(), &s).unwrap();
    let a = SpectralAssignment::solve(l, b, &s).unwrap();
    assert!(verify_eigen(&a, &s).unwrap());
}
