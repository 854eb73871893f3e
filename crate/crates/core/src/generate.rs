//! Seeded random instances for tests and the command-line harness.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::limits::l_infty_product;
use crate::morphism::Morphism;
use crate::space::FinSpace;
use crate::submetry::submetry_check;
use crate::value::ExtValue;

pub use rand_chacha::ChaCha8Rng as Rng8;

pub fn rng(seed: u64) -> Rng8 {
    rand::SeedableRng::seed_from_u64(seed)
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| char::from(b'a' + i as u8).to_string()).collect()
}

/// `k / den` with `k ∈ 1..=max_num`, `den ∈ 1..=max_den`.
pub fn rational(rng: &mut impl Rng, max_num: u64, max_den: u64) -> ExtValue {
    let n = rng.gen_range(1..=max_num);
    let d = rng.gen_range(1..=max_den);
    ExtValue::Finite(BigRational::new(BigInt::from(n), BigInt::from(d)))
}

/// Shortest-path closure of symmetric positive weights.
fn closure(n: usize, mut w: Vec<ExtValue>) -> Vec<ExtValue> {
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &w[i * n + k] + &w[k * n + j];
                if via < w[i * n + j] {
                    w[i * n + j] = via;
                }
            }
        }
    }
    w
}

/// A random finite metric space on points `a, b, ...` (`n ≤ 26`).
pub fn metric(rng: &mut impl Rng, n: usize) -> FinSpace {
    assert!((1..=26).contains(&n));
    let mut w = vec![ExtValue::zero(); n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rational(rng, 6, 2);
            w[i * n + j] = v.clone();
            w[j * n + i] = v;
        }
    }
    let d = closure(n, w);
    FinSpace::from_fn(labels(n), |i, j| d[i * n + j].clone()).expect("distinct labels").0
}

/// A random surjection from `x` onto `m` points, with the largest base
/// metric (up to a random contraction) making it 1-Lipschitz.
pub fn surjective_lipschitz(rng: &mut impl Rng, x: &Arc<FinSpace>, m: usize) -> Morphism {
    let n = x.len();
    assert!((1..=n).contains(&m));
    let mut map: Vec<usize> = (0..n).map(|i| if i < m { i } else { rng.gen_range(0..m) }).collect();
    map.shuffle(rng);
    let shrink = match rng.gen_range(0..3) {
        0 => BigRational::from_integer(1.into()),
        _ => BigRational::new(BigInt::from(rng.gen_range(1..=4)), BigInt::from(4)),
    };
    let mut w = vec![ExtValue::Inf; m * m];
    for b in 0..m {
        w[b * m + b] = ExtValue::zero();
    }
    for a in 0..n {
        for c in 0..n {
            if map[a] != map[c] {
                let v = x.d(a, c).scale(&shrink);
                let slot = &mut w[map[a] * m + map[c]];
                if v < *slot {
                    *slot = v;
                }
            }
        }
    }
    let d = closure(m, w);
    let base = FinSpace::from_fn(labels(m), |i, j| d[i * m + j].clone()).expect("distinct labels").0;
    Morphism::new(x.clone(), Arc::new(base), map).expect("contracted quotient metric")
}

/// A random 1-Lipschitz map `x -> y`; falls back to a constant map.
pub fn lipschitz_map(rng: &mut impl Rng, x: &Arc<FinSpace>, y: &Arc<FinSpace>) -> Morphism {
    for _ in 0..32 {
        let map = (0..x.len()).map(|_| rng.gen_range(0..y.len())).collect();
        if let Ok(f) = Morphism::new(x.clone(), y.clone(), map) {
            return f;
        }
    }
    Morphism::constant(x.clone(), y.clone(), rng.gen_range(0..y.len()))
}

/// The projection `base × F -> base` for a random fiber `F`.
pub fn submetry_onto(rng: &mut impl Rng, base: &Arc<FinSpace>, max_fiber: usize) -> Morphism {
    let k = rng.gen_range(1..=max_fiber);
    let fiber = Arc::new(metric(rng, k));
    let prod = l_infty_product(base, &fiber).expect("nonempty factors");
    prod.left
}

/// A random submetry with at most `max_total` points in its domain: either
/// a product projection or a filtered random quotient.
pub fn submetry(rng: &mut impl Rng, max_total: usize) -> Morphism {
    loop {
        if rng.gen_bool(0.5) {
            let b = rng.gen_range(1..=max_total.min(3));
            let base = Arc::new(metric(rng, b));
            let f = submetry_onto(rng, &base, (max_total / b).max(1));
            if f.dom().len() <= max_total {
                return f;
            }
        } else {
            let n = rng.gen_range(1..=max_total);
            let x = Arc::new(metric(rng, n));
            let m = rng.gen_range(1..=x.len());
            let f = surjective_lipschitz(rng, &x, m);
            if submetry_check(&f).map(|r| r.verdict).unwrap_or(false) {
                return f;
            }
        }
    }
}
