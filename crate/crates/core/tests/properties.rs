use std::sync::OnceLock;

use proptest::prelude::*;

use superloc::derivations::{
    decompose, delta_map, derivation_space, recompose, supercommutator, DerivationSpace, LinearMap,
};
use superloc::localder::{builtin_probe_file, probe_closure, probe_constraint};
use superloc::{catalog, Element, Scalar, Subspace, SuperAlgebra};

struct Fixture {
    alg: SuperAlgebra,
    der: DerivationSpace,
    closure: Subspace,
    probes: Vec<Element>,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let alg = catalog("super-schrodinger").unwrap();
        let der = derivation_space(&alg).unwrap();
        let probes = builtin_probe_file().to_elements(&alg).unwrap();
        let closure = probe_closure(&der, &probes);
        Fixture {
            alg,
            der,
            closure,
            probes,
        }
    })
}

fn rational() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Scalar::ratio(n, d).unwrap())
}

fn element() -> impl Strategy<Value = Element> {
    prop::collection::vec(rational(), 9).prop_map(Element::from_coords)
}

fn combination(maps: &[LinearMap], coeffs: &[Scalar]) -> LinearMap {
    let terms: Vec<_> = coeffs.iter().cloned().zip(maps).collect();
    LinearMap::linear_combination(9, &terms)
}

fn derivation() -> impl Strategy<Value = LinearMap> {
    prop::collection::vec(rational(), 9).prop_map(|c| combination(&fixture().der.maps(), &c))
}

fn homogeneous() -> impl Strategy<Value = LinearMap> {
    (any::<bool>(), prop::collection::vec(rational(), 6)).prop_map(|(odd, c)| {
        let f = fixture();
        let (maps, parity) = if odd {
            (f.der.odd_maps(), superloc::Parity::Odd)
        } else {
            (f.der.even_maps(), superloc::Parity::Even)
        };
        combination(&maps, &c[..maps.len()])
            .declare(&f.alg, parity)
            .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivations_lie_in_the_closure(d in derivation()) {
        prop_assert!(fixture().closure.contains(&d.to_vec()).unwrap());
    }

    #[test]
    fn derivations_satisfy_each_probe(d in derivation(), x in element()) {
        prop_assume!(!x.is_zero());
        prop_assert!(probe_constraint(&fixture().der, &x).contains(&d.to_vec()).unwrap());
    }

    #[test]
    fn constraints_are_scale_invariant(x in element(), c in rational()) {
        prop_assume!(!x.is_zero() && !c.is_zero());
        let der = &fixture().der;
        prop_assert_eq!(probe_constraint(der, &x), probe_constraint(der, &x.scale(&c)));
    }

    #[test]
    fn supercommutator_closes(a in homogeneous(), b in homogeneous()) {
        let c = supercommutator(&a, &b).unwrap();
        prop_assert!(fixture().der.contains(&c).unwrap());
    }

    #[test]
    fn decompose_inverts_recompose(d in derivation()) {
        let f = fixture();
        let delta = delta_map();
        let coords = decompose(&f.alg, &delta, &d).unwrap();
        prop_assert!(coords.inner.coords[5].is_zero());
        prop_assert_eq!(recompose(&f.alg, &delta, &coords).unwrap(), d);
    }

    #[test]
    fn closure_ignores_probe_order(perm in Just((0..37usize).collect::<Vec<_>>()).prop_shuffle()) {
        let f = fixture();
        let shuffled: Vec<Element> = perm.iter().map(|&i| f.probes[i].clone()).collect();
        prop_assert_eq!(&probe_closure(&f.der, &shuffled), &f.closure);
    }

    #[test]
    fn adding_a_probe_never_grows_the_closure(x in element(), k in 1usize..37) {
        let f = fixture();
        let base = probe_closure(&f.der, &f.probes[..k]);
        let mut more = f.probes[..k].to_vec();
        more.push(x);
        let grown = probe_closure(&f.der, &more);
        prop_assert!(base.contains_all(&grown).unwrap());
    }
}

#[test]
fn closure_matches_an_intersection_fold() {
    let f = fixture();
    let folded = f
        .probes
        .iter()
        .map(|x| probe_constraint(&f.der, x))
        .reduce(|a, b| a.intersect(&b).unwrap())
        .unwrap();
    assert_eq!(folded, f.closure);
}
