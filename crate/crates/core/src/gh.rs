//! Correspondences and the Gromov–Hausdorff distance between finite spaces,
//! with the two-point gluing that realizes it as a Hausdorff distance.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::space::{label, FinSpace};
use crate::submetry::{hausdorff, proper_family_check, Family};
use crate::value::ExtValue;

/// Default cap on `|Y|^|X| · |X|^|Y|` for [`gh_exact`].
pub const DEFAULT_GH_BUDGET: u128 = 10_000_000;
/// Largest `|X|·|Y|` accepted by [`gh_enum_oracle`].
pub const ORACLE_MAX_CELLS: usize = 16;

/// A left- and right-total relation between two spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correspondence {
    left: Arc<FinSpace>,
    right: Arc<FinSpace>,
    pairs: BTreeSet<(usize, usize)>,
}

impl Correspondence {
    pub fn new(
        left: Arc<FinSpace>,
        right: Arc<FinSpace>,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Correspondence> {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        if pairs.iter().any(|&(x, y)| x >= left.len() || y >= right.len()) {
            return Err(Error::DomainMismatch("pair index out of range".into()));
        }
        let mut uncovered = Vec::new();
        for x in 0..left.len() {
            if !pairs.iter().any(|p| p.0 == x) {
                uncovered.push(label::tagged(0, left.label(x)));
            }
        }
        for y in 0..right.len() {
            if !pairs.iter().any(|p| p.1 == y) {
                uncovered.push(label::tagged(1, right.label(y)));
            }
        }
        if !uncovered.is_empty() {
            return Err(Error::NotTotal { uncovered });
        }
        Ok(Correspondence { left, right, pairs })
    }

    pub fn from_labels(left: Arc<FinSpace>, right: Arc<FinSpace>, pairs: &[(String, String)]) -> Result<Correspondence> {
        let idx = pairs
            .iter()
            .map(|(x, y)| Ok((left.require(x, "correspondence left")?, right.require(y, "correspondence right")?)))
            .collect::<Result<Vec<_>>>()?;
        Correspondence::new(left, right, idx)
    }

    /// Graph of `phi` together with the transpose of the graph of `psi`.
    pub fn from_maps(left: Arc<FinSpace>, right: Arc<FinSpace>, phi: &[usize], psi: &[usize]) -> Result<Correspondence> {
        let pairs = phi.iter().enumerate().map(|(x, &y)| (x, y)).chain(psi.iter().enumerate().map(|(y, &x)| (x, y)));
        Correspondence::new(left, right, pairs.collect::<Vec<_>>())
    }

    pub fn left(&self) -> &Arc<FinSpace> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FinSpace> {
        &self.right
    }

    pub fn pairs(&self) -> &BTreeSet<(usize, usize)> {
        &self.pairs
    }

    pub fn label_pairs(&self) -> Vec<(String, String)> {
        self.pairs
            .iter()
            .map(|&(x, y)| (self.left.label(x).to_string(), self.right.label(y).to_string()))
            .collect()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.contains(&(x, y))
    }

    /// `max |d_X(x, x') - d_Y(y, y')|` over pairs of pairs.
    pub fn distortion(&self) -> ExtValue {
        let mut worst = ExtValue::zero();
        for &(x, y) in &self.pairs {
            for &(x2, y2) in &self.pairs {
                let d = self.left.d(x, x2).abs_diff(self.right.d(y, y2));
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }
}

/// Outcome of [`gh_exact`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GHResult {
    pub value: ExtValue,
    pub witness: Correspondence,
    pub phi: Vec<usize>,
    pub psi: Vec<usize>,
}

impl GHResult {
    pub fn phi_labels(&self) -> BTreeMap<String, String> {
        let (x, y) = (self.witness.left(), self.witness.right());
        self.phi.iter().enumerate().map(|(a, &b)| (x.label(a).to_string(), y.label(b).to_string())).collect()
    }

    pub fn psi_labels(&self) -> BTreeMap<String, String> {
        let (x, y) = (self.witness.left(), self.witness.right());
        self.psi.iter().enumerate().map(|(b, &a)| (y.label(b).to_string(), x.label(a).to_string())).collect()
    }
}

/// Ranks of `|d_X(a, b) - d_Y(c, d)|` so the search compares integers.
struct CostTable {
    values: Vec<ExtValue>,
    rank: Vec<Vec<u32>>,
    x: Vec<Vec<usize>>,
    y: Vec<Vec<usize>>,
}

impl CostTable {
    fn new(x: &FinSpace, y: &FinSpace) -> Self {
        let index = |s: &FinSpace| {
            let vals: Vec<ExtValue> = (0..s.len())
                .flat_map(|a| (0..s.len()).map(move |b| (a, b)))
                .map(|(a, b)| s.d(a, b).clone())
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let m = (0..s.len()).map(|a| (0..s.len()).map(|b| vals.binary_search(s.d(a, b)).unwrap()).collect()).collect();
            (vals, m)
        };
        let (xv, xm) = index(x);
        let (yv, ym) = index(y);
        let values: Vec<ExtValue> = xv
            .iter()
            .flat_map(|a| yv.iter().map(move |b| a.abs_diff(b)))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let rank = xv
            .iter()
            .map(|a| yv.iter().map(|b| values.binary_search(&a.abs_diff(b)).unwrap() as u32).collect())
            .collect();
        CostTable { values, rank, x: xm, y: ym }
    }

    fn cost(&self, a: usize, b: usize, c: usize, d: usize) -> u32 {
        self.rank[self.x[a][b]][self.y[c][d]]
    }
}

fn search_size(nx: usize, ny: usize) -> u128 {
    let pow = |b: usize, e: usize| (b as u128).checked_pow(e as u32).unwrap_or(u128::MAX);
    pow(ny, nx).saturating_mul(pow(nx, ny))
}

/// Exact Gromov–Hausdorff distance by exhaustive search over map pairs
/// `φ: X -> Y`, `ψ: Y -> X`.
///
/// The witness is the lexicographically least optimal `(φ, ψ)`.
pub fn gh_exact(x: &Arc<FinSpace>, y: &Arc<FinSpace>, budget: u128) -> Result<GHResult> {
    if x.diameter().is_inf() || y.diameter().is_inf() {
        return Err(Error::InfiniteDistance);
    }
    let size = search_size(x.len(), y.len());
    if size > budget {
        return Err(Error::Budget { size, cap: budget });
    }
    let table = CostTable::new(x, y);
    let mut search = Search {
        t: &table,
        nx: x.len(),
        ny: y.len(),
        phi: vec![0; x.len()],
        psi: vec![0; y.len()],
        best: u32::MAX,
        found: None,
    };
    search.phi_step(0, 0);
    let (phi, psi) = search.found.expect("search visits at least one map pair");
    let value = table.values[search.best as usize].half();
    let witness = Correspondence::from_maps(x.clone(), y.clone(), &phi, &psi)?;
    Ok(GHResult { value, witness, phi, psi })
}

struct Search<'a> {
    t: &'a CostTable,
    nx: usize,
    ny: usize,
    phi: Vec<usize>,
    psi: Vec<usize>,
    best: u32,
    found: Option<(Vec<usize>, Vec<usize>)>,
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.best == 0
    }

    fn phi_step(&mut self, k: usize, acc: u32) {
        if k == self.nx {
            self.psi_step(0, acc);
            return;
        }
        for b in 0..self.ny {
            if self.done() {
                return;
            }
            let mut c = acc;
            for a in 0..k {
                c = c.max(self.t.cost(a, k, self.phi[a], b));
            }
            if c >= self.best {
                continue;
            }
            self.phi[k] = b;
            self.phi_step(k + 1, c);
        }
    }

    fn psi_step(&mut self, k: usize, acc: u32) {
        if k == self.ny {
            // reached only on strict improvement
            self.best = acc;
            self.found = Some((self.phi.clone(), self.psi.clone()));
            return;
        }
        for a in 0..self.nx {
            if self.done() {
                return;
            }
            let mut c = acc;
            for y in 0..k {
                c = c.max(self.t.cost(self.psi[y], a, y, k));
            }
            for x in 0..self.nx {
                c = c.max(self.t.cost(x, a, self.phi[x], k));
            }
            if c >= self.best {
                continue;
            }
            self.psi[k] = a;
            self.psi_step(k + 1, c);
        }
    }
}

/// Half the least distortion over all total relations, by enumerating every
/// subset of `X × Y`.
pub fn gh_enum_oracle(x: &FinSpace, y: &FinSpace) -> Result<ExtValue> {
    let (nx, ny) = (x.len(), y.len());
    let cells = nx * ny;
    if cells > ORACLE_MAX_CELLS {
        return Err(Error::TooLarge { size: cells as u128, cap: ORACLE_MAX_CELLS as u128 });
    }
    let pair = |c: usize| (c / ny, c % ny);
    let mut values = BTreeSet::new();
    for c0 in 0..cells {
        for c1 in 0..cells {
            let ((a, b), (a2, b2)) = (pair(c0), pair(c1));
            values.insert(x.d(a, a2).abs_diff(y.d(b, b2)));
        }
    }
    let values: Vec<ExtValue> = values.into_iter().collect();
    let mut cost = vec![0u16; cells * cells];
    for c0 in 0..cells {
        for c1 in 0..cells {
            let ((a, b), (a2, b2)) = (pair(c0), pair(c1));
            cost[c0 * cells + c1] = values.binary_search(&x.d(a, a2).abs_diff(y.d(b, b2))).unwrap() as u16;
        }
    }
    let full = 1usize << cells;
    let mut dis = vec![0u16; full];
    let mut left = vec![0u32; full];
    let mut right = vec![0u32; full];
    let mut best = u16::MAX;
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let mut d = dis[rest];
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            d = d.max(cost[low * cells + j]);
            bits &= bits - 1;
        }
        dis[mask] = d;
        let (a, b) = pair(low);
        left[mask] = left[rest] | 1 << a;
        right[mask] = right[rest] | 1 << b;
        if left[mask] == (1 << nx) - 1 && right[mask] == (1 << ny) - 1 && d < best {
            best = d;
        }
    }
    Ok(values[best as usize].half())
}

/// A proper family over some `2_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoPointFamily {
    family: Family,
    r: ExtValue,
}

impl TwoPointFamily {
    pub fn new(family: Family) -> Result<TwoPointFamily> {
        let base = family.base();
        if base.len() != 2 {
            return Err(Error::NotTwoPoint(format!("base has {} points", base.len())));
        }
        let r = base.d(0, 1).clone();
        let expected = FinSpace::two_point(&r).map_err(|_| Error::NotTwoPoint(format!("base distance {r}")))?;
        if **base != expected {
            return Err(Error::NotTwoPoint(format!("base is not labelled as 2_{r}")));
        }
        Ok(TwoPointFamily { family, r })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn r(&self) -> &ExtValue {
        &self.r
    }

    /// The fiber over `0` (`end = 0`) or over `r` (`end = 1`).
    pub fn fiber_space(&self, end: usize) -> (Arc<FinSpace>, Vec<usize>) {
        self.family.fiber_space(end)
    }
}

/// The space `X ⊔ Y` with `d(x, y) = r + min_{(x',y') ∈ R} d(x, x') + d(y', y)`,
/// projected onto `2_r`. Without `r` the radius is half the distortion of `R`.
pub fn glue_over_two_points(corr: &Correspondence, r: Option<&ExtValue>) -> Result<TwoPointFamily> {
    let dis = corr.distortion();
    let r = match r {
        Some(r) => r.clone(),
        None => dis.half(),
    };
    if !r.is_positive() || r.is_inf() {
        return Err(Error::DegenerateRadius(r));
    }
    if r.double() < dis {
        return Err(Error::RadiusTooSmall { r, distortion: dis });
    }
    let (x, y) = (corr.left(), corr.right());
    let nx = x.len();
    let labels: Vec<String> = x
        .labels()
        .iter()
        .map(|l| label::tagged(0, l))
        .chain(y.labels().iter().map(|l| label::tagged(1, l)))
        .collect();
    let cross = |a: usize, b: usize| -> ExtValue {
        let chain = corr.pairs().iter().map(|&(a2, b2)| x.d(a, a2) + y.d(b2, b)).min().expect("correspondences are nonempty");
        &r + &chain
    };
    let d = |i: usize, j: usize| match (i < nx, j < nx) {
        (true, true) => x.d(i, j).clone(),
        (false, false) => y.d(i - nx, j - nx).clone(),
        (true, false) => cross(i, j - nx),
        (false, true) => cross(j, i - nx),
    };
    let (z, pos) = FinSpace::from_fn_checked(labels, d)?;
    let z = Arc::new(z);
    let base = Arc::new(FinSpace::two_point(&r)?);
    let mut map = vec![0; z.len()];
    for (i, &p) in pos.iter().enumerate() {
        map[p] = usize::from(i >= nx);
    }
    let fam = proper_family_check(&Morphism::new(z, base, map)?)?;
    let out = TwoPointFamily::new(fam)?;
    debug_assert_eq!(hausdorff(out.family.total(), out.family.fiber(0), out.family.fiber(1)), r);
    Ok(out)
}

/// `R = {(x, y) : d_Q(x, y) ≤ r}` between the two fibers.
pub fn correspondence_from_family(fam: &TwoPointFamily) -> Result<Correspondence> {
    let q = fam.family.total();
    let (x, xi) = fam.fiber_space(0);
    let (y, yi) = fam.fiber_space(1);
    let mut pairs = Vec::new();
    for (a, &qa) in xi.iter().enumerate() {
        for (b, &qb) in yi.iter().enumerate() {
            if q.d(qa, qb) <= &fam.r {
                pairs.push((a, b));
            }
        }
    }
    let corr = Correspondence::new(x, y, pairs)?;
    assert!(corr.distortion() <= fam.r.double(), "triangle inequality in the total space");
    Ok(corr)
}

/// `Σ r_k` for a chain of two-point families whose consecutive end fibers are
/// matched by the isometries in `links` (labels of the total spaces).
pub fn chain_upper_bound(families: &[TwoPointFamily], links: &[BTreeMap<String, String>]) -> Result<ExtValue> {
    if families.is_empty() {
        return Err(Error::DomainMismatch("empty chain".into()));
    }
    if links.len() + 1 != families.len() {
        return Err(Error::DomainMismatch(format!("{} links for {} families", links.len(), families.len())));
    }
    for (k, link) in links.iter().enumerate() {
        check_link(k, &families[k], &families[k + 1], link)?;
    }
    Ok(families.iter().map(|f| f.r.clone()).sum())
}

fn check_link(index: usize, from: &TwoPointFamily, to: &TwoPointFamily, link: &BTreeMap<String, String>) -> Result<()> {
    let fail = |reason: String| Error::LinkNotIsometry { index, reason };
    let (src, _) = from.fiber_space(1);
    let (dst, _) = to.fiber_space(0);
    let mut map = Vec::with_capacity(src.len());
    for (key, _) in link.iter() {
        if src.index_of(key).is_none() {
            return Err(fail(format!("{key} is not in the far fiber")));
        }
    }
    for l in src.labels() {
        let target = link.get(l).ok_or_else(|| fail(format!("{l} is not mapped")))?;
        map.push(dst.index_of(target).ok_or_else(|| fail(format!("{target} is not in the near fiber")))?);
    }
    let f = Morphism::new(src.clone(), dst.clone(), map).map_err(|e| fail(e.to_string()))?;
    if !f.is_isometry() {
        return Err(fail("fibers are not matched isometrically".into()));
    }
    Ok(())
}
