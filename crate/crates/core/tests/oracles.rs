//! Hand-checkable values, each recomputed by a brute-force oracle that
//! shares no code with the library, then frozen.

use std::collections::BTreeSet;
use std::sync::Arc;

use finmet::gh::{chain_upper_bound, gh_enum_oracle, gh_exact, glue_over_two_points, Correspondence, DEFAULT_GH_BUDGET};
use finmet::lsm::{covering_from_submetry, covering_pullback, local_submetry_radius, lsm_covering_check};
use finmet::space::label;
use finmet::submetry::{
    diagonal_family, family_to_map, hausdorff_distance, hyperspace, map_to_family, pointed_pullback, proper_family_check,
    submetry_check, PointedFamily, SubsetRef,
};
use finmet::{
    colimit_glue, fiber_product, generate, l_infty_product, metric_identification, quotient_by_group, validate_space,
    Error, ExtValue, FinSpace, GroupAction, Morphism,
};

fn v(s: &str) -> ExtValue {
    s.parse().unwrap()
}

fn space(labels: &[&str], rows: &[&[&str]]) -> Arc<FinSpace> {
    let m = rows.iter().map(|r| r.iter().map(|s| v(s)).collect()).collect();
    Arc::new(validate_space(labels.iter().map(|s| s.to_string()).collect(), m).unwrap().0)
}

fn two(r: &str) -> Arc<FinSpace> {
    Arc::new(FinSpace::two_point(&v(r)).unwrap())
}

fn pt() -> Arc<FinSpace> {
    Arc::new(FinSpace::point())
}

fn at<'a>(x: &'a FinSpace, a: &str, b: &str) -> &'a ExtValue {
    x.d(x.index_of(a).unwrap(), x.index_of(b).unwrap())
}

// ---- oracles ----

fn directed_oracle(x: &FinSpace, from: &[usize], to: &[usize]) -> ExtValue {
    let mut sup = ExtValue::zero();
    for &a in from {
        let mut inf = ExtValue::inf();
        for &b in to {
            if *x.d(a, b) < inf {
                inf = x.d(a, b).clone();
            }
        }
        if inf > sup {
            sup = inf;
        }
    }
    sup
}

fn hausdorff_oracle(x: &FinSpace, a: &[usize], b: &[usize]) -> ExtValue {
    directed_oracle(x, a, b).max(directed_oracle(x, b, a))
}

fn distortion_oracle(x: &FinSpace, y: &FinSpace, pairs: &[(usize, usize)]) -> ExtValue {
    let mut worst = ExtValue::zero();
    for &(a, b) in pairs {
        for &(c, d) in pairs {
            let gap = x.d(a, c).abs_diff(y.d(b, d));
            if gap > worst {
                worst = gap;
            }
        }
    }
    worst
}

/// Half the least distortion over every total relation.
fn gh_relation_oracle(x: &FinSpace, y: &FinSpace) -> ExtValue {
    let cells: Vec<(usize, usize)> = (0..x.len()).flat_map(|a| (0..y.len()).map(move |b| (a, b))).collect();
    let mut best = ExtValue::inf();
    for mask in 1u32..(1 << cells.len()) {
        let pairs: Vec<_> = (0..cells.len()).filter(|k| mask >> k & 1 == 1).map(|k| cells[k]).collect();
        let left: BTreeSet<_> = pairs.iter().map(|p| p.0).collect();
        let right: BTreeSet<_> = pairs.iter().map(|p| p.1).collect();
        if left.len() == x.len() && right.len() == y.len() {
            let d = distortion_oracle(x, y, &pairs);
            if d < best {
                best = d;
            }
        }
    }
    best.half()
}

/// Does `f` map `ball(x', s)` onto `ball(f x', s)` for every `x'` within `r`
/// of `x` and every grid `s` in `(0, r - d(x, x'))`?
fn radius_condition(f: &Morphism, x: usize, r: &ExtValue, grid: &[ExtValue]) -> bool {
    let (dom, cod) = (f.dom(), f.cod());
    (0..dom.len()).filter(|&xp| dom.d(x, xp) < r).all(|xp| {
        grid.iter().filter(|s| s.is_positive() && &(dom.d(x, xp) + *s) < r).all(|s| {
            let image: BTreeSet<usize> = (0..dom.len()).filter(|&q| dom.d(xp, q) < s).map(|q| f.apply(q)).collect();
            let ball: BTreeSet<usize> = (0..cod.len()).filter(|&b| cod.d(f.apply(xp), b) < s).collect();
            image == ball
        })
    })
}

fn grid(step_den: u64, up_to: u64) -> Vec<ExtValue> {
    (1..=up_to * step_den).map(|k| ExtValue::ratio(k, step_den).unwrap()).collect()
}

/// Largest radius on the 1/16 grid at which the condition holds; `None` if
/// it holds on the whole grid. Radii `s` use a grid twice as fine, so each
/// gap between consecutive radii contains a sample.
fn radius_sweep(f: &Morphism, x: usize) -> Option<ExtValue> {
    let (rs, ss) = (grid(16, 6), grid(32, 6));
    let mut last = None;
    for r in &rs {
        if radius_condition(f, x, r, &ss) {
            last = Some(r.clone());
        } else {
            return last;
        }
    }
    None
}

fn exact_lift(base: &FinSpace, legs: &[Morphism], (x1, x2, x3): (usize, usize, usize)) -> bool {
    legs.iter().any(|leg| {
        let u = leg.dom();
        let over = |x: usize| (0..u.len()).filter(move |&a| leg.apply(a) == x);
        over(x1).any(|a| {
            over(x2).any(|b| u.d(a, b) == base.d(x1, x2) && over(x3).any(|c| u.d(b, c) == base.d(x2, x3)))
        })
    })
}

// ---- metric-core ----

#[test]
fn infinite_two_point_space_is_extended() {
    let (_, class) = validate_space(vec!["p".into(), "q".into()], vec![vec![v("0"), v("inf")], vec![v("inf"), v("0")]]).unwrap();
    assert!(class.is_metric);
    assert!(!class.is_pseudo);
}

#[test]
fn identification_of_a_zero_pair() {
    let x = space(&["a", "b", "c"], &[&["0", "0", "1"], &["0", "0", "1"], &["1", "1", "0"]]);
    let (q, p) = metric_identification(&x).unwrap();
    assert_eq!(q.len(), 2);
    assert_eq!(q.d(p.apply(0), p.apply(2)), &v("1"));
    // every choice of representative gives the same distance
    for a in 0..2 {
        assert_eq!(x.d(a, 2), q.d(p.apply(a), p.apply(2)));
    }
}

#[test]
fn product_of_two_point_spaces() {
    let (x, y) = (two("1"), two("2"));
    let prod = l_infty_product(&x, &y).unwrap();
    assert_eq!(prod.space.len(), 4);
    assert_eq!(at(&prod.space, &label::pair("0", "0"), &label::pair("1", "2")), &v("2"));
    for a in 0..4 {
        for b in 0..4 {
            let want = x.d(prod.left.apply(a), prod.left.apply(b)).max(y.d(prod.right.apply(a), prod.right.apply(b)));
            assert_eq!(prod.space.d(a, b), want);
        }
    }
}

#[test]
fn fiber_product_of_identities_is_the_diagonal() {
    let x = two("1");
    let id = Morphism::identity(x.clone());
    let span = fiber_product(&id, &id).unwrap();
    assert_eq!(span.space.len(), 2);
    assert_eq!(at(&span.space, &label::pair("0", "0"), &label::pair("1", "1")), &v("1"));
}

#[test]
fn glued_intervals() {
    let x = two("1");
    // endpoint 1 of the first copy to endpoint 0 of the second
    let c = colimit_glue(&[x.clone(), x.clone()], &[((0, 1), (1, 0))]).unwrap();
    assert_eq!(c.space.len(), 3);
    let (a, cc) = (c.injections[0].apply(0), c.injections[1].apply(1));
    assert_eq!(c.space.d(a, cc), &v("2"));

    let c = colimit_glue(&[x.clone(), x.clone()], &[((0, 0), (1, 0)), ((0, 1), (1, 1))]).unwrap();
    assert_eq!(c.space.len(), 2);
    assert_eq!(c.space.d(0, 1), &v("1"));
}

#[test]
fn swap_orbit_quotient() {
    let x = space(&["a", "b", "c"], &[&["0", "1", "1"], &["1", "0", "2"], &["1", "2", "0"]]);
    let action = GroupAction::new(x.clone(), vec![vec![0, 2, 1]]).unwrap();
    let (q, p) = quotient_by_group(&action, 10).unwrap();
    assert_eq!(q.len(), 2);
    // orbit-min: min(d(a,b), d(a,c)) = 1
    assert_eq!(q.d(p.apply(0), p.apply(1)), &v("1"));
}

#[test]
fn contraction_onto_two_point_space() {
    let f = Morphism::new(two("2"), two("1"), vec![0, 1]).unwrap();
    assert_eq!(f.label_map().get("2").map(String::as_str), Some("1"));
}

// ---- submetry ----

#[test]
fn hausdorff_on_a_line() {
    let x = space(&["0", "1", "3"], &[&["0", "1", "3"], &["1", "0", "2"], &["3", "2", "0"]]);
    let (a, b) = (vec![0], vec![1, 2]);
    let oracle = hausdorff_oracle(&x, &a, &b);
    assert_eq!(oracle, v("3"));
    let lib = hausdorff_distance(&SubsetRef::new(x.clone(), a).unwrap(), &SubsetRef::new(x.clone(), b).unwrap()).unwrap();
    assert_eq!(lib, oracle);
}

#[test]
fn hausdorff_to_the_empty_set() {
    let x = two("1");
    let empty = SubsetRef::new(x.clone(), vec![]).unwrap();
    let full = SubsetRef::new(x.clone(), vec![0, 1]).unwrap();
    assert_eq!(hausdorff_distance(&empty, &full).unwrap(), ExtValue::inf());
    assert_eq!(hausdorff_distance(&empty, &empty).unwrap(), ExtValue::zero());
}

#[test]
fn projection_and_bijection_verdicts() {
    let prod = l_infty_product(&two("1"), &two("2")).unwrap();
    assert!(submetry_check(&prod.left).unwrap().verdict);
    let f = Morphism::new(two("2"), two("1"), vec![0, 1]).unwrap();
    let r = submetry_check(&f).unwrap();
    assert!(!r.verdict);
    // singleton fibers at distance 2 over base points at distance 1
    assert_eq!(hausdorff_oracle(f.dom(), &[0], &[1]), v("2"));
}

#[test]
fn infinite_base_distance_is_rejected() {
    let x = space(&["p", "q"], &[&["0", "inf"], &["inf", "0"]]);
    let f = Morphism::identity(x);
    assert_eq!(proper_family_check(&f).unwrap_err().code(), "E_INFINITE_BASE_DISTANCE");
}

#[test]
fn hyperspace_of_two_points() {
    let x = two("1");
    let hyp = hyperspace(&Morphism::to_point(x.clone()), 16).unwrap();
    let h = hyp.space();
    assert_eq!(h.len(), 3);
    for a in 0..3 {
        for b in 0..3 {
            let want = hausdorff_oracle(&x, hyp.members(a), hyp.members(b));
            assert_eq!(h.d(a, b), &want);
            if a != b {
                assert_eq!(want, v("1"));
            }
        }
    }
}

#[test]
fn map_to_family_and_back() {
    let x = two("1");
    let hyp = hyperspace(&Morphism::to_point(x.clone()), 16).unwrap();
    let g = Morphism::new(x.clone(), hyp.space().clone(), vec![hyp.index_of_subset(&[0]).unwrap(), hyp.index_of_subset(&[0, 1]).unwrap()])
        .unwrap();
    let fam = map_to_family(&hyp, &g).unwrap();
    let p = fam.family.projection();
    assert_eq!(p.dom().len(), 3);
    assert_eq!((fam.family.fiber(0).len(), fam.family.fiber(1).len()), (1, 2));
    let pairs: BTreeSet<_> = fam.pairs().into_iter().collect();
    assert_eq!(pairs, BTreeSet::from([(0, 0), (0, 1), (1, 1)]));
    assert_eq!(family_to_map(&hyp, &fam).unwrap(), g);
}

fn two_fiber_family() -> PointedFamily {
    let x = two("1");
    let prod = l_infty_product(&two("3"), &x).unwrap();
    let fam = proper_family_check(&prod.right).unwrap();
    let s = (0..2).map(|b| prod.space.index_of(&label::pair("0", x.label(b))).unwrap()).collect();
    PointedFamily::new(fam, vec![Morphism::new(x, prod.space.clone(), s).unwrap()]).unwrap()
}

#[test]
fn pullback_to_one_base_point() {
    let fam = two_fiber_family();
    let x = fam.family().base().clone();
    let incl = Morphism::new(pt(), x, vec![0]).unwrap();
    let out = pointed_pullback(&fam, &incl).unwrap();
    let total = out.family().total();
    assert_eq!(total.len(), 2);
    // fiber over 0: points (f, 0) at distance 3
    assert_eq!(total.d(0, 1), &v("3"));
    let s = &out.sections()[0];
    assert_eq!(total.label(s.apply(0)), label::pair(&label::pair("0", "0"), "*"));
}

#[test]
fn diagonal_family_over_a_point() {
    let p = Morphism::to_point(two("1"));
    let fam = PointedFamily::new(proper_family_check(&p).unwrap(), vec![]).unwrap();
    let out = diagonal_family(&fam).unwrap();
    let total = out.family().total();
    assert_eq!(total.len(), 4);
    assert_eq!(out.sections().len(), 1);
    let diag = &out.sections()[0];
    for a in 0..2 {
        assert_eq!(total.label(diag.apply(a)), label::pair(&a.to_string(), &a.to_string()));
    }
}

// ---- lsm-descent ----

#[test]
fn radius_of_the_contracting_bijection() {
    let f = Morphism::new(two("2"), two("1"), vec![0, 1]).unwrap();
    assert_eq!(radius_sweep(&f, 0), Some(v("1")));
    assert_eq!(local_submetry_radius(&f, 0).unwrap(), v("1"));
    // just above 1 the condition already fails
    assert!(radius_condition(&f, 0, &v("1"), &grid(32, 6)));
    assert!(!radius_condition(&f, 0, &v("17/16"), &grid(32, 6)));
}

#[test]
fn radius_of_a_constant_map() {
    let f = Morphism::to_point(two("1"));
    assert_eq!(radius_sweep(&f, 0), None);
    assert_eq!(local_submetry_radius(&f, 0).unwrap(), ExtValue::inf());
}

#[test]
fn separate_points_do_not_cover() {
    let x = two("1");
    let legs = vec![Morphism::new(pt(), x.clone(), vec![0]).unwrap(), Morphism::new(pt(), x.clone(), vec![1]).unwrap()];
    let failing: Vec<_> = (0..2)
        .flat_map(|a| (0..2).flat_map(move |b| (0..2).map(move |c| (a, b, c))))
        .filter(|&t| !exact_lift(&x, &legs, t))
        .collect();
    assert!(failing.contains(&(0, 1, 0)));
    assert_eq!(failing[0], (0, 0, 1));
    match lsm_covering_check(x.clone(), legs).unwrap_err() {
        Error::TripleUnliftable { x1, x2, x3, .. } => assert_eq!((x1.as_str(), x2.as_str(), x3.as_str()), ("0", "0", "1")),
        e => panic!("{e:?}"),
    }
}

#[test]
fn ball_covering_of_a_square_projection() {
    let x = two("1");
    let prod = l_infty_product(&x, &x).unwrap();
    let cov = covering_from_submetry(&prod.right, &v("1/2")).unwrap();
    // radius 1/2 balls are singletons: every nonempty subset of size ≤ 3
    let expected = 4 + 6 + 4;
    assert_eq!(cov.legs().len(), expected);
    let all: Vec<_> = (0..2).flat_map(|a| (0..2).flat_map(move |b| (0..2).map(move |c| (a, b, c)))).collect();
    assert!(all.iter().all(|&t| exact_lift(&x, cov.legs(), t)));
}

#[test]
fn pullback_to_one_point_of_two_identity_legs() {
    let x = two("1");
    let cov = lsm_covering_check(x.clone(), vec![Morphism::identity(x.clone()); 2]).unwrap();
    let incl = Morphism::new(pt(), x, vec![0]).unwrap();
    let out = covering_pullback(&cov, &incl).unwrap();
    assert_eq!(out.legs().len(), 2);
    assert!(out.legs().iter().all(|l| l.dom().len() == 1));
}

// ---- gromov-hausdorff ----

#[test]
fn distortion_examples() {
    let y = two("2");
    let c = Correspondence::new(pt(), y.clone(), [(0, 0), (0, 1)]).unwrap();
    assert_eq!(distortion_oracle(&pt(), &y, &[(0, 0), (0, 1)]), v("2"));
    assert_eq!(c.distortion(), v("2"));
    let c = Correspondence::new(two("1"), y.clone(), [(0, 0), (1, 1)]).unwrap();
    assert_eq!(distortion_oracle(&two("1"), &y, &[(0, 0), (1, 1)]), v("1"));
    assert_eq!(c.distortion(), v("1"));
}

#[test]
fn gh_of_small_pairs() {
    let p = pt();
    for r in ["1", "2", "3/4", "5"] {
        let x = two(r);
        let want = v(r).half();
        assert_eq!(gh_relation_oracle(&p, &x), want);
        assert_eq!(gh_exact(&p, &x, DEFAULT_GH_BUDGET).unwrap().value, want);
        assert_eq!(gh_enum_oracle(&p, &x).unwrap(), want);
    }
    assert_eq!(gh_relation_oracle(&two("1"), &two("2")), v("1/2"));
    assert_eq!(gh_exact(&two("1"), &two("2"), DEFAULT_GH_BUDGET).unwrap().value, v("1/2"));
}

/// `gh` between seeded random spaces, computed by [`gh_relation_oracle`].
const FROZEN_GH: &[(u64, &str)] = &[
    (0, "1/2"),
    (1, "1/2"),
    (2, "3/2"),
    (3, "3/4"),
    (4, "9/4"),
    (5, "1/2"),
    (6, "7/4"),
    (7, "1/2"),
];

fn seeded_pair(seed: u64) -> (Arc<FinSpace>, Arc<FinSpace>) {
    let mut rng = generate::rng(seed);
    (Arc::new(generate::metric(&mut rng, 3)), Arc::new(generate::metric(&mut rng, 3)))
}

#[test]
fn frozen_gh_values() {
    for &(seed, want) in FROZEN_GH {
        let (x, y) = seeded_pair(seed);
        assert_eq!(gh_relation_oracle(&x, &y), v(want), "oracle, seed {seed}");
        assert_eq!(gh_exact(&x, &y, DEFAULT_GH_BUDGET).unwrap().value, v(want), "seed {seed}");
    }
}

#[test]
fn gluing_a_point_to_two_points() {
    let y = two("2");
    let c = Correspondence::new(pt(), y.clone(), [(0, 0), (0, 1)]).unwrap();
    let fam = glue_over_two_points(&c, Some(&v("1"))).unwrap();
    let z = fam.family().total();
    assert_eq!(z.len(), 3);
    // r + min over R of d(pt, x') + d(y', y) = 1 + 0 for both y
    assert_eq!(at(z, "0:*", "1:0"), &v("1"));
    assert_eq!(at(z, "0:*", "1:2"), &v("1"));
    assert_eq!(at(z, "1:0", "1:2"), &v("2"));
    let f = fam.family();
    assert_eq!(hausdorff_oracle(z, f.fiber(0), f.fiber(1)), v("1"));
}

#[test]
fn optimal_gluing_realises_gh() {
    let r = gh_exact(&two("1"), &two("2"), DEFAULT_GH_BUDGET).unwrap();
    let fam = glue_over_two_points(&r.witness, Some(&v("1/2"))).unwrap();
    let f = fam.family();
    assert_eq!(hausdorff_oracle(f.total(), f.fiber(0), f.fiber(1)), v("1/2"));
}

#[test]
fn chain_through_an_isometric_middle() {
    let (x, y) = (two("1"), two("2"));
    let there = gh_exact(&x, &y, DEFAULT_GH_BUDGET).unwrap().witness;
    let back = Correspondence::new(y.clone(), x.clone(), there.pairs().iter().map(|&(a, b)| (b, a))).unwrap();
    let f0 = glue_over_two_points(&there, None).unwrap();
    let f1 = glue_over_two_points(&back, None).unwrap();
    let link = [("1:0", "0:0"), ("1:2", "0:2")].iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    let bound = chain_upper_bound(&[f0, f1], &[link]).unwrap();
    assert_eq!(bound, v("1"));
    assert_eq!(gh_exact(&x, &x, DEFAULT_GH_BUDGET).unwrap().value, ExtValue::zero());
}

