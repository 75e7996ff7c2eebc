use dessins_core::{
    dessin_from_json, dessin_from_text, dessin_to_json, dessin_to_text, from_triangles, to_triangles, Dessin,
    Orientation, Permutation,
};
use proptest::prelude::*;

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn dessin() -> impl Strategy<Value = Dessin> {
    (1usize..=7).prop_flat_map(|n| (perm(n), perm(n))).prop_map(|(s, a)| Dessin::new(s, a).unwrap())
}

fn connected_dessin() -> impl Strategy<Value = Dessin> {
    dessin().prop_filter("connected", Dessin::is_connected)
}

fn relabelled() -> impl Strategy<Value = (Dessin, Permutation)> {
    connected_dessin().prop_flat_map(|d| {
        let n = d.degree();
        (Just(d), perm(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn canonical_form_is_a_relabelling_invariant((d, c) in relabelled()) {
        let e = d.relabel(&c).unwrap();
        prop_assert_eq!(d.canonical_form().unwrap(), e.canonical_form().unwrap());
        let w = d.is_isomorphic(&e).expect("relabelled dessins are isomorphic");
        prop_assert_eq!(d.relabel(&w).unwrap(), e);
    }

    #[test]
    fn euler_characteristic_is_even_and_at_most_two(d in connected_dessin()) {
        let chi = d.euler_characteristic();
        prop_assert!(chi <= 2);
        prop_assert_eq!(chi.rem_euclid(2), 0);
        prop_assert_eq!(d.genus().unwrap() as i64, (2 - chi) / 2);
        let p = d.passport().unwrap();
        prop_assert!(p.validate().is_ok());
    }

    #[test]
    fn product_of_the_three_permutations_is_trivial(d in dessin()) {
        prop_assert!(d.sigma().then(d.alpha()).then(&d.phi()).is_identity());
    }

    #[test]
    fn dual_and_swap_are_involutions(d in connected_dessin()) {
        prop_assert!(d.dual().dual().is_isomorphic(&d).is_some());
        prop_assert_eq!(d.swap_colors().swap_colors(), d.clone());
        let p = d.passport().unwrap();
        let q = d.swap_colors().passport().unwrap();
        prop_assert_eq!(p.black, q.white);
        prop_assert_eq!(p.genus, q.genus);
        prop_assert_eq!(d.dual().genus().unwrap(), d.genus().unwrap());
    }

    #[test]
    fn triangle_model_round_trip(d in connected_dessin()) {
        let t = to_triangles(&d);
        prop_assert_eq!(t.triangle_count(), 2 * d.degree());
        match from_triangles(&t) {
            Orientation::Oriented(e) => prop_assert!(e.is_isomorphic(&d).is_some()),
            Orientation::NonOrientable { .. } => prop_assert!(false, "an oriented dessin became non-orientable"),
        }
    }

    #[test]
    fn json_and_text_round_trips(d in dessin()) {
        prop_assert_eq!(dessin_from_json(&dessin_to_json(&d)).unwrap(), d.clone());
        prop_assert_eq!(dessin_from_text(&dessin_to_text(&d)).unwrap(), d);
    }
}

#[test]
fn disconnected_dessins_have_no_genus() {
    let d = Dessin::one_dart().disjoint_union(&Dessin::one_dart());
    assert!(!d.is_connected());
    assert!(d.genus().is_err());
}
