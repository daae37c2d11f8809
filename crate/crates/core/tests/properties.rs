use proptest::prelude::*;
use rand::Rng;

use wlip_core::laws::gen::{
    gen_base, gen_below, gen_family, gen_map, gen_member, gen_per, gen_proper_base, gen_topology,
    gen_weak_pm, gen_weak_pm_with, rng_for, GenMode, MetricShape,
};
use wlip_core::maps::{is_scalar_weak_lipschitz, is_weak_lipschitz, separating_witness};
use wlip_core::metric::{
    ball, ball_family, pullback_metric, sum_metric, sup_metric, validate_weak_pm,
};
use wlip_core::model::{parse_model, render_model, Model};
use wlip_core::structure::{
    is_member, product_base, product_metric, ptau_base, structures_equal, ProductCarrier,
};
use wlip_core::topology::{
    is_continuous, is_continuous_by_opens, topology_from_family, topology_from_structure,
    FiniteTopology,
};
use wlip_core::uniformity::{
    is_uc_map, is_uc_map_by_entourages, is_uc_metric, product_uniformity, uniformity_from_structure,
};
use wlip_core::{ExtValue, Mode, PointMap, Rational, StructureBase, WeakPseudoMetric};

fn mode_of(extended: bool) -> Mode {
    if extended {
        Mode::Extended
    } else {
        Mode::Strict
    }
}

fn entry(code: u8) -> ExtValue {
    match code {
        4 => ExtValue::Infinite,
        k => ExtValue::int(u64::from(k)),
    }
}

/// Symmetric-or-not raw matrices with entries in `{0, 1, 2, 3, inf}`.
fn raw_matrix() -> impl Strategy<Value = Vec<Vec<ExtValue>>> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(0u8..5, n), n).prop_map(|rows| {
            rows.into_iter()
                .map(|r| r.into_iter().map(entry).collect())
                .collect()
        })
    })
}

/// Finite in strict mode, symmetric, and satisfying the triangle inequality.
fn is_form(rows: &[Vec<ExtValue>], mode: Mode) -> bool {
    let n = rows.len();
    let sum = |a: &ExtValue, b: &ExtValue| match (a.finite(), b.finite()) {
        (Some(x), Some(y)) => ExtValue::Finite(x + y),
        _ => ExtValue::Infinite,
    };
    let finite_ok = mode == Mode::Extended || rows.iter().flatten().all(ExtValue::is_finite);
    let symmetric = (0..n).all(|i| (0..n).all(|j| rows[i][j] == rows[j][i]));
    let triangle =
        (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| rows[i][k] <= sum(&rows[i][j], &rows[j][k]))));
    finite_ok && symmetric && triangle
}

/// A weak candidate is never in a structure generated by pseudo-metrics.
fn member(d: &WeakPseudoMetric, b: &StructureBase) -> bool {
    match is_member(d, b) {
        Ok(c) => c.is_member(),
        Err(wlip_core::Error::KindMismatch(_)) => false,
        Err(e) => panic!("{e}"),
    }
}

fn same_structure(a: &StructureBase, b: &StructureBase) -> bool {
    a.kind() == b.kind() && structures_equal(a, b).unwrap()
}

fn satisfies_axioms(rows: &[Vec<ExtValue>], mode: Mode) -> bool {
    is_form(rows, mode) && rows.iter().enumerate().any(|(i, r)| r[i].is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn validator_matches_the_axioms(rows in raw_matrix(), extended in any::<bool>()) {
        let mode = mode_of(extended);
        let expected = satisfies_axioms(&rows, mode);
        // Strict mode refuses an infinite entry outright.
        let validated = validate_weak_pm(&rows, mode).map(|r| r.is_valid()).unwrap_or(false);
        prop_assert_eq!(validated, expected);
        prop_assert_eq!(WeakPseudoMetric::new(rows, mode).is_ok(), expected);
    }

    #[test]
    fn sums_and_sups_stay_valid(seed in any::<u64>(), n in 1usize..=5, extended in any::<bool>()) {
        let mut rng = rng_for(seed, 0);
        let shape = MetricShape::weak(mode_of(extended));
        let d1 = gen_weak_pm(&mut rng, n, &shape).unwrap();
        let d2 = gen_weak_pm(&mut rng, n, &shape).unwrap();
        for form in [sum_metric(&d1, &d2).unwrap(), sup_metric(&d1, &d2).unwrap()] {
            prop_assert!(is_form(&form.rows(), shape.mode));
        }
    }

    #[test]
    fn zero_relations_are_partial_equivalences(seed in any::<u64>(), n in 1usize..=5, extended in any::<bool>()) {
        let d = gen_weak_pm(&mut rng_for(seed, 1), n, &MetricShape::weak(mode_of(extended))).unwrap();
        let z = d.zero_relation();
        prop_assert!(z.is_symmetric() && z.is_transitive() && z.meets_diagonal());
        let p = gen_per(&mut rng_for(seed, 2), n);
        prop_assert!(p.is_symmetric() && p.is_transitive() && p.meets_diagonal());
    }

    #[test]
    fn balls_contain_their_centre_and_are_enumerated(seed in any::<u64>(), n in 1usize..=5, extended in any::<bool>()) {
        let mut rng = rng_for(seed, 3);
        let d = gen_weak_pm(&mut rng, n, &MetricShape::weak(mode_of(extended))).unwrap();
        let x = rng.gen_range(0..n);
        let eps = Rational::new(rng.gen_range(1..=20i64).into(), 4.into());
        match ball(&d, x, &eps) {
            Ok(u) => {
                prop_assert!(u.contains(x));
                prop_assert!(ball_family(&d, x).iter().any(|e| e.set == u));
            }
            Err(_) => prop_assert!(ExtValue::Finite(eps) <= *d.get(x, x)),
        }
        for e in ball_family(&d, x) {
            prop_assert_eq!(ball(&d, x, &e.epsilon).unwrap(), e.set);
        }
    }

    #[test]
    fn identity_pullback_is_neutral(seed in any::<u64>(), n in 1usize..=5) {
        let d = gen_weak_pm(&mut rng_for(seed, 4), n, &MetricShape::weak(Mode::Extended)).unwrap();
        prop_assert_eq!(&pullback_metric(&PointMap::identity(n), &d).unwrap(), d.form());
    }

    #[test]
    fn members_dominated_by_their_certificate(seed in any::<u64>(), n in 1usize..=5, extended in any::<bool>()) {
        let mut rng = rng_for(seed, 5);
        let b = gen_base(&mut rng, n, &MetricShape::weak(mode_of(extended)), 3).unwrap();
        let d = gen_member(&mut rng, &b).unwrap();
        let cert = is_member(&d, &b).unwrap();
        let alpha = cert.alpha().expect("sampled members are members").clone();
        for i in 0..n {
            for j in 0..n {
                prop_assert!(*d.get(i, j) <= b.envelope().get(i, j).scale(&alpha));
            }
        }
        // Anything below a member is a member.
        let below = gen_below(&mut rng, &d);
        prop_assert!(is_member(&below, &b).unwrap().is_member());
    }

    #[test]
    fn membership_depends_only_on_the_envelope_pattern(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = rng_for(seed, 6);
        let shape = MetricShape::weak(Mode::Strict);
        let b1 = gen_base(&mut rng, n, &shape, 3).unwrap();
        // Doubling the generators and adding one below the envelope keeps Z(s).
        let mut gens: Vec<WeakPseudoMetric> = b1
            .generators()
            .iter()
            .map(|g| wlip_core::metric::scale_metric(&Rational::from_integer(2.into()), g).unwrap().into_weak().unwrap())
            .collect();
        gens.push(gen_below(&mut rng, &b1.envelope_metric().unwrap_or_else(|| b1.generators()[0].clone())));
        let b2 = StructureBase::new(gens).unwrap();
        prop_assert_eq!(b1.zero_relation(), b2.zero_relation());
        prop_assert!(structures_equal(&b1, &b2).unwrap());
        for _ in 0..20 {
            let d = gen_weak_pm(&mut rng, n, &shape).unwrap();
            prop_assert_eq!(member(&d, &b1), member(&d, &b2));
        }
    }

    #[test]
    fn structure_equality_is_an_equivalence(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = rng_for(seed, 7);
        let shape = MetricShape { max: 1, ..MetricShape::weak(Mode::Strict) };
        let bs: Vec<StructureBase> = (0..3).map(|_| gen_base(&mut rng, n, &shape, 2).unwrap()).collect();
        for a in &bs {
            prop_assert!(same_structure(a, a));
            for b in &bs {
                let ab = same_structure(a, b);
                prop_assert_eq!(ab, same_structure(b, a));
                for c in &bs {
                    if ab && same_structure(b, c) {
                        prop_assert!(same_structure(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn family_topology_is_coarser(seed in any::<u64>(), n in 1usize..=5, extended in any::<bool>()) {
        let b = gen_base(&mut rng_for(seed, 8), n, &MetricShape::weak(mode_of(extended)), 3).unwrap();
        let fam = topology_from_family(n, b.generators()).unwrap();
        prop_assert!(fam.is_coarser_or_equal(&topology_from_structure(&b)));
    }

    #[test]
    fn sampled_balls_are_open_and_non_neighbours_separate(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = rng_for(seed, 9);
        let b = gen_base(&mut rng, n, &MetricShape::weak(Mode::Extended), 3).unwrap();
        let tau = topology_from_structure(&b);
        for _ in 0..10 {
            let d = gen_member(&mut rng, &b).unwrap();
            for x in 0..n {
                for e in ball_family(&d, x) {
                    prop_assert!(tau.is_open(e.set));
                }
            }
        }
        for x in 0..n {
            for xi in 0..n {
                if !tau.min_neighborhood(x).contains(xi) {
                    let (d, eps) = separating_witness(&b, x, xi).expect("non-neighbours separate");
                    prop_assert!(is_member(&d, &b).unwrap().is_member());
                    let u = ball(&d, x, &eps).unwrap();
                    prop_assert!(u.contains(x) && !u.contains(xi));
                }
            }
        }
    }

    #[test]
    fn continuity_deciders_agree(seed in any::<u64>(), n in 1usize..=4, m in 1usize..=4) {
        let mut rng = rng_for(seed, 10);
        let (tx, ty) = (gen_topology(&mut rng, n), gen_topology(&mut rng, m));
        let f = gen_map(&mut rng, n, m);
        prop_assert_eq!(
            is_continuous(&f, &tx, &ty).unwrap().holds(),
            is_continuous_by_opens(&f, &tx, &ty).unwrap().holds()
        );
    }

    #[test]
    fn induced_continuity_is_scalar_weak_lipschitz(seed in any::<u64>(), n in 1usize..=4, m in 1usize..=4, extended in any::<bool>()) {
        let mut rng = rng_for(seed, 16);
        let shape = MetricShape::weak(mode_of(extended));
        let bx = gen_base(&mut rng, n, &shape, 3).unwrap();
        let by = gen_base(&mut rng, m, &shape, 3).unwrap();
        let f = gen_map(&mut rng, n, m);
        let continuous =
            is_continuous(&f, &topology_from_structure(&bx), &topology_from_structure(&by)).unwrap().holds();
        prop_assert_eq!(continuous, is_scalar_weak_lipschitz(&f, &bx, &by).unwrap().holds());
        if is_weak_lipschitz(&f, &bx, &by).unwrap().holds() {
            prop_assert!(continuous);
        }
    }

    #[test]
    fn preorder_round_trip(seed in any::<u64>(), n in 1usize..=5) {
        let tau = gen_topology(&mut rng_for(seed, 11), n);
        prop_assert_eq!(FiniteTopology::from_preorder(&tau.to_preorder()).unwrap(), tau);
    }

    #[test]
    fn kernels_and_uc_maps(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=3) {
        let mut rng = rng_for(seed, 12);
        let shape = MetricShape::weak(Mode::Strict);
        let bx = gen_proper_base(&mut rng, n, &shape, 3).unwrap();
        let by = gen_proper_base(&mut rng, m, &shape, 3).unwrap();
        let (ux, uy) = (uniformity_from_structure(&bx).unwrap(), uniformity_from_structure(&by).unwrap());
        for u in [&ux, &uy] {
            let k = u.kernel();
            prop_assert!(k.is_symmetric() && k.is_transitive() && k.meets_diagonal());
        }
        for g in bx.generators() {
            prop_assert!(is_uc_metric(g, &ux).unwrap());
        }
        let f = gen_map(&mut rng, n, m);
        prop_assert_eq!(is_uc_map(&f, &ux, &uy).unwrap().holds(), is_uc_map_by_entourages(&f, &ux, &uy).unwrap());
        let p = product_base(&[&bx, &by]).unwrap();
        prop_assert_eq!(uniformity_from_structure(&p).unwrap(), product_uniformity(&ux, &uy));
    }

    #[test]
    fn product_metrics_validate(seed in any::<u64>(), n in 1usize..=3, m in 1usize..=3, extended in any::<bool>()) {
        let mut rng = rng_for(seed, 13);
        let shape = MetricShape::weak(mode_of(extended));
        let d1 = gen_weak_pm(&mut rng, n, &shape).unwrap();
        let d2 = gen_weak_pm(&mut rng, m, &shape).unwrap();
        let p = product_metric(&[&d1, &d2]).unwrap();
        prop_assert!(validate_weak_pm(&p.rows(), p.mode()).unwrap().is_valid());
        let c = ProductCarrier::new(vec![n, m]).unwrap();
        prop_assert_eq!(c.len(), n * m);
        for i in 0..c.len() {
            prop_assert_eq!(c.index(&c.tuple(i)), i);
        }
    }

    #[test]
    fn render_then_parse_is_identity(seed in any::<u64>(), n in 1usize..=4, m in 1usize..=3, extended in any::<bool>()) {
        let mut rng = rng_for(seed, 14);
        let shape = MetricShape::weak(mode_of(extended));
        let mut model = Model::new();
        model.add_space("X", wlip_core::metric::Carrier::new(n).unwrap()).unwrap();
        let labels = (0..m).map(|i| format!("y{i}")).collect();
        model.add_space("Y", wlip_core::metric::Carrier::with_labels(m, labels).unwrap()).unwrap();
        let b = gen_base(&mut rng, n, &shape, 3).unwrap();
        let names: Vec<String> = (0..b.generators().len()).map(|i| format!("g{i}")).collect();
        for (name, g) in names.iter().zip(b.generators()) {
            model.add_metric(name, "X", g.clone()).unwrap();
        }
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        model.add_base("B", "X", &refs).unwrap();
        model.add_topology("T", "X", gen_topology(&mut rng, n)).unwrap();
        model.add_family("A", "X", gen_family(&mut rng, n)).unwrap();
        model.add_map("f", "X", "Y", gen_map(&mut rng, n, m)).unwrap();
        let text = render_model(&model);
        let back = parse_model(&text).unwrap();
        prop_assert_eq!(&back, &model);
        prop_assert_eq!(render_model(&back), text);
    }
}

#[test]
fn ptau_generators_are_valid_for_every_small_topology() {
    for n in 1..=4 {
        for (_, tau) in wlip_core::topology::enumerate_topologies(n).unwrap() {
            let b = ptau_base(&tau).unwrap();
            for g in b.generators() {
                assert!(validate_weak_pm(&g.rows(), g.mode()).unwrap().is_valid());
            }
        }
    }
}

#[test]
fn generator_soundness_at_volume() {
    for mode in [GenMode::Per, GenMode::Repair] {
        for (k, m) in [Mode::Strict, Mode::Extended].into_iter().enumerate() {
            let mut rng = rng_for(k as u64, 15);
            for i in 0..50_000u32 {
                let n = 1 + (i as usize % 5);
                let shape = if i % 2 == 0 {
                    MetricShape::weak(m)
                } else {
                    MetricShape::pseudo(m)
                };
                let d = gen_weak_pm_with(&mut rng, n, &shape, mode).unwrap();
                assert!(validate_weak_pm(&d.rows(), m).unwrap().is_valid());
            }
        }
    }
}
