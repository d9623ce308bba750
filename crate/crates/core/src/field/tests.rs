use super::*;
use proptest::prelude::*;

fn field(s: &str) -> Field {
    s.parse().unwrap()
}

#[test]
fn spec_parsing() {
    let f = field("GF(7)");
    assert_eq!(f.order(), Some(7));
    assert_eq!(f.spec().kind, FieldKind::Prime);

    // the unique irreducible quadratic over F_2
    let irreducible: Vec<Vec<u32>> = (0..4u32)
        .map(|c| vec![c & 1, c >> 1, 1])
        .filter(|m| (0..2u32).all(|x| (m[0] + m[1] * x + x * x) % 2 != 0))
        .collect();
    assert_eq!(irreducible.len(), 1);
    let f4 = field("GF(4)");
    assert_eq!(f4.spec().modulus.as_deref(), Some(&irreducible[0][..]));
    assert_eq!(f4.spec().kind, FieldKind::Galois);
    assert_eq!(field("GF(2^2)"), f4);

    assert_eq!("GF(6)".parse::<Field>(), Err(Error::NotPrimePower(6)));
    assert!("GF(3)(t)".parse::<Field>().is_err());
    assert!("GF(2)(t,u,v)".parse::<Field>().is_err());
    assert!("GF(9; x^2+1)".parse::<Field>().is_ok());
    assert!(matches!(
        "GF(9; x^2+2*x+1)".parse::<Field>(),
        Err(Error::ReducibleModulus(_))
    ));
    let ft = field("GF(4)(t,u)");
    assert_eq!(ft.name(), "GF(4)(t,u)");
    assert_eq!(ft.square_degree(), 4);
}

#[test]
fn arithmetic_examples() {
    let f = field("GF(5)");
    assert_eq!(f.mul(&f.from_int(2), &f.from_int(3)), f.one());

    let ft = field("GF(2)(t)");
    let a = ft.parse_element("t+1").unwrap();
    assert!(ft.is_zero(&ft.add(&a, &a)));
    let b = ft.parse_element("t^2+t").unwrap();
    let inv = ft.inv(&b).unwrap();
    assert_eq!(ft.format(&inv), "1/(t^2+t)");
    assert_eq!(ft.inv(&ft.zero()), Err(Error::DivisionByZero));
}

#[test]
fn square_examples() {
    let f5 = field("GF(5)");
    let squares: Vec<_> = (0..5).map(|x| (x * x) % 5).collect();
    for a in 0..5 {
        assert_eq!(f5.is_square(&f5.from_int(a)), squares.contains(&a));
    }
    assert!(!f5.is_square(&f5.from_int(2)));

    let f4 = field("GF(4)");
    for a in f4.elements().unwrap() {
        assert!(f4.is_square(&a));
        let r = f4.sqrt(&a).unwrap();
        assert_eq!(f4.square(&r), a);
    }

    let ft = field("GF(2)(t)");
    let a = ft.parse_element("t^2+1").unwrap();
    assert!(ft.is_square(&a));
    assert_eq!(ft.sqrt(&a).unwrap(), ft.parse_element("t+1").unwrap());
    assert!(matches!(ft.sqrt(&ft.parse_element("t").unwrap()), Err(Error::NotASquare(_))));
}

#[test]
fn frobenius_examples() {
    let ft = field("GF(2)(t)");
    let c = ft.frobenius_coords(&ft.parse_element("t^3+t").unwrap()).unwrap();
    assert_eq!(c.get(&[0]), Some(&ft.zero()));
    assert_eq!(c.get(&[1]), Some(&ft.parse_element("t+1").unwrap()));
    let c1 = ft.frobenius_coords(&ft.one()).unwrap();
    assert_eq!(c1.values(), &[ft.one(), ft.zero()]);

    let ftu = field("GF(2)(t,u)");
    let c = ftu.frobenius_coords(&ftu.parse_element("t u").unwrap()).unwrap();
    for (e, b) in c.iter() {
        let expect = if e == vec![1, 1] { ftu.one() } else { ftu.zero() };
        assert_eq!(b, &expect);
    }
    assert!(field("GF(4)").frobenius_coords(&field("GF(4)").one()).is_err());
}

#[test]
fn square_dependence_examples() {
    let ft = field("GF(2)(t)");
    let p = |s: &str| ft.parse_element(s).unwrap();
    assert_eq!(ft.square_dependence(&[p("1"), p("t")]).unwrap(), None);
    assert_eq!(
        ft.square_dependence(&[p("t"), p("t^3")]).unwrap(),
        Some(vec![p("t"), p("1")])
    );
    assert_eq!(
        ft.square_dependence(&[p("t"), p("t+1"), p("1")]).unwrap(),
        Some(vec![p("1"), p("1"), p("1")])
    );
    assert!(matches!(ft.square_dependence(&[]), Err(Error::Empty(_))));
}

#[test]
fn differential_invariant_examples() {
    let f = field("GF(2)(t,u)");
    let entries = |text: &[&str]| text.iter().map(|x| f.parse_element(x).unwrap()).collect::<Vec<_>>();
    // ⟪t, u⟫ maps to dt ∧ du / (t u)
    assert!(!f.differential_invariant_vanishes(&entries(&["1", "t", "u", "t*u"])).unwrap());
    // ⟪t, 1 + t⟫ and ⟪t, t⟫ are zero
    assert!(f.differential_invariant_vanishes(&entries(&["1", "t", "t+1", "t^2+t"])).unwrap());
    assert!(f.differential_invariant_vanishes(&entries(&["1", "t", "t", "t^2"])).unwrap());
    // the term of u^3 t / (t + 1)^2 is that of t u
    assert!(f.differential_invariant_vanishes(&entries(&["t*u", "u^3*t/(t+1)^2"])).unwrap());
    assert!(field("GF(2)(t)").differential_invariant_vanishes(&entries(&["1"])).is_err());
}

#[test]
fn random_units_are_reproducible() {
    let f5 = field("GF(5)");
    let a = f5.random_unit_seeded(0);
    assert_eq!(a, f5.random_unit_seeded(0));
    assert!(!f5.is_zero(&a));
    let ft = field("GF(2)(t)");
    for seed in 0..50 {
        let a = ft.random_unit_seeded(seed);
        assert_eq!(a, ft.random_unit_seeded(seed));
        let FieldElement::Rational(r) = &a else { panic!() };
        assert!(!r.is_zero());
        assert!(r.num().total_degree().unwrap() <= 4);
        assert!(r.den().total_degree().unwrap() <= 4);
    }
}

#[test]
fn square_class_representatives() {
    let ftu = field("GF(2)(t,u)");
    let p = |s: &str| ftu.parse_element(s).unwrap();
    assert_eq!(ftu.square_class_rep(&p("t^3 u^2/(t+u)^2")), p("t"));
    assert_eq!(ftu.square_class_rep(&p("(t+1)/(u)")), p("t u + u"));
    let f5 = field("GF(5)");
    assert_eq!(f5.square_class_rep(&f5.from_int(4)), f5.one());
    assert_eq!(
        f5.square_class_rep(&f5.from_int(3)),
        f5.square_class_rep(&f5.from_int(2))
    );
}

#[test]
fn element_text_round_trip() {
    let ftu = field("GF(4)(t,u)");
    for s in ["(t^2+t+1)/(u+1)", "x*t+u", "(x+1)*t^2*u/(t*u+1)", "t u", "tu", "2t", "t^-2"] {
        let a = ftu.parse_element(s).unwrap();
        assert_eq!(ftu.parse_element(&ftu.format(&a)).unwrap(), a, "{s}");
    }
    let f9 = field("GF(9)");
    for a in f9.elements().unwrap() {
        assert_eq!(f9.parse_element(&f9.format(&a)).unwrap(), a);
    }
    assert!(ftu.parse_element("t/0").is_err());
    assert!(ftu.parse_element("v").is_err());
    assert!(field("GF(7)").parse_element("x").is_err());
    let lets = vec![("a".to_string(), ftu.parse_element("t+1").unwrap())];
    assert_eq!(
        ftu.parse_element_with("a^2", &lets).unwrap(),
        ftu.parse_element("t^2+1").unwrap()
    );
}

const FIELDS: [&str; 7] = [
    "GF(3)",
    "GF(9)",
    "GF(8)",
    "GF(2)(t)",
    "GF(4)(t)",
    "GF(2)(t,u)",
    "GF(4)(t,u)",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(idx in 0..FIELDS.len(), seed in any::<u64>()) {
        let f = field(FIELDS[idx]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = f.random_element(&mut rng);
        let b = f.random_element(&mut rng);
        let c = f.random_unit(&mut rng);
        prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        prop_assert_eq!(f.add(&f.add(&a, &b), &c), f.add(&a, &f.add(&b, &c)));
        prop_assert_eq!(
            f.mul(&a, &f.add(&b, &c)),
            f.add(&f.mul(&a, &b), &f.mul(&a, &c))
        );
        prop_assert!(f.is_one(&f.mul(&c, &f.inv(&c).unwrap())));
        prop_assert!(f.is_zero(&f.add(&a, &f.neg(&a))));
        prop_assert_eq!(f.div(&f.mul(&a, &c), &c).unwrap(), a);
    }

    #[test]
    fn squares_have_roots(idx in 0..FIELDS.len(), seed in any::<u64>()) {
        let f = field(FIELDS[idx]);
        let a = f.random_unit_seeded(seed);
        let sq = f.square(&a);
        prop_assert!(f.is_square(&sq));
        let r = f.sqrt(&sq).unwrap();
        prop_assert_eq!(f.square(&r), sq);
        prop_assert!(f.same_square_class(&a, &f.square_class_rep(&a)));
    }

    #[test]
    fn frobenius_reconstruction(idx in 3..FIELDS.len(), seed in any::<u64>()) {
        let f = field(FIELDS[idx]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = f.random_element(&mut rng);
        let c = f.frobenius_coords(&a).unwrap();
        prop_assert_eq!(c.len(), f.square_degree());
        prop_assert_eq!(f.from_frobenius_coords(&c).unwrap(), a);
    }

    #[test]
    fn square_dependence_sound_and_complete(idx in 3..FIELDS.len(), seed in any::<u64>(), extra in 0usize..3) {
        let f = field(FIELDS[idx]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = f.square_degree() + 1 + extra;
        let v: Vec<_> = (0..len).map(|_| f.random_unit(&mut rng)).collect();
        let c = f.square_dependence(&v).unwrap().expect("more vectors than the dimension");
        prop_assert!(c.iter().any(|x| !f.is_zero(x)));
        let total = f.sum(&c.iter().zip(&v).map(|(ci, vi)| f.mul(&f.square(ci), vi)).collect::<Vec<_>>());
        prop_assert!(f.is_zero(&total));
    }

    #[test]
    fn square_combination_solutions_verify(idx in 3..FIELDS.len(), seed in any::<u64>()) {
        let f = field(FIELDS[idx]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<_> = (0..3).map(|_| f.random_unit(&mut rng)).collect();
        let x: Vec<_> = (0..3).map(|_| f.random_element(&mut rng)).collect();
        let b = f.sum(&a.iter().zip(&x).map(|(ai, xi)| f.mul(ai, &f.square(xi))).collect::<Vec<_>>());
        let y = f.solve_square_combination(&a, &b).unwrap().expect("b is represented by construction");
        let back = f.sum(&a.iter().zip(&y).map(|(ai, yi)| f.mul(ai, &f.square(yi))).collect::<Vec<_>>());
        prop_assert_eq!(back, b);
    }
}
