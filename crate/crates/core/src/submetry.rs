//! Hausdorff distance, submetries, proper families, hyperspaces of
//! compact subsets, and pointed families.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits::{fiber_product, product_on};
use crate::morphism::Morphism;
use crate::space::{label, FinSpace};
use crate::value::ExtValue;

/// Default cap on the number of hyperspace points.
pub const DEFAULT_HYPERSPACE_CAP: u128 = 4095;

/// A possibly empty subset of a space.
#[derive(Clone, Debug)]
pub struct SubsetRef {
    space: Arc<FinSpace>,
    members: Vec<usize>,
}

impl SubsetRef {
    pub fn new(space: Arc<FinSpace>, mut members: Vec<usize>) -> Result<SubsetRef> {
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&m| m >= space.len()) {
            return Err(Error::UnknownPoint { label: bad.to_string(), context: "subset".into() });
        }
        Ok(SubsetRef { space, members })
    }

    pub fn from_labels(space: Arc<FinSpace>, labels: &[String]) -> Result<SubsetRef> {
        let members = labels.iter().map(|l| space.require(l, "subset")).collect::<Result<_>>()?;
        SubsetRef::new(space, members)
    }

    pub fn space(&self) -> &Arc<FinSpace> {
        &self.space
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }
}

/// `sup_{a∈from} inf_{b∈to} d(a,b)`, with `inf ∅ = ∞` and `sup ∅ = 0`.
fn directed(space: &FinSpace, from: &[usize], to: &[usize]) -> ExtValue {
    from.iter()
        .map(|&a| to.iter().map(|&b| space.d(a, b)).min().cloned().unwrap_or(ExtValue::Inf))
        .max()
        .unwrap_or_else(ExtValue::zero)
}

pub(crate) fn hausdorff(space: &FinSpace, a: &[usize], b: &[usize]) -> ExtValue {
    directed(space, a, b).max(directed(space, b, a))
}

/// Hausdorff distance between two subsets of one space.
///
/// `dH(∅, F) = ∞` for nonempty `F` and `dH(∅, ∅) = 0`.
pub fn hausdorff_distance(f0: &SubsetRef, f1: &SubsetRef) -> Result<ExtValue> {
    if f0.space != f1.space {
        return Err(Error::SpaceMismatch);
    }
    Ok(hausdorff(&f0.space, &f0.members, &f1.members))
}

/// Where a submetry check failed: `point` is `deficit` farther from the
/// fiber over `target` than its image is from `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmetryWitness {
    pub point: usize,
    pub target: usize,
    pub deficit: ExtValue,
}

/// Outcome of [`submetry_check`] with each characterization evaluated
/// separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmetryReport {
    pub verdict: bool,
    pub surjective: bool,
    /// Fiber Hausdorff distance bounded by base distance.
    pub definition: bool,
    /// `min_{x'∈f⁻¹(b)} d(x,x') = d(f(x), b)` for all `x`, `b`.
    pub fiber_min: bool,
    /// `f(ball(x,ρ)) = ball(f(x),ρ)` at every breakpoint radius.
    pub ball: bool,
    pub witness: Option<SubmetryWitness>,
}

impl SubmetryReport {
    pub fn criteria_agree(&self) -> bool {
        self.definition == self.fiber_min && self.fiber_min == self.ball
    }
}

fn ball(space: &FinSpace, center: usize, radius: &ExtValue) -> Vec<bool> {
    space.row(center).iter().map(|d| d < radius).collect()
}

/// Radii at which open balls of `spaces` can change, one per interval of
/// constancy: every positive finite distance, plus the largest one + 1.
pub(crate) fn breakpoint_radii(spaces: &[&FinSpace]) -> Vec<ExtValue> {
    let mut vals = std::collections::BTreeSet::new();
    for s in spaces {
        vals.extend(s.distance_values());
    }
    let top = vals.iter().next_back().cloned().unwrap_or_else(ExtValue::zero);
    vals.insert(&top + &ExtValue::one());
    vals.into_iter().collect()
}

/// Evaluates whether `f` is a submetry by three equivalent criteria and
/// reports each verdict.
///
/// Fails with [`Error::InfiniteBaseDistance`] when two inhabited fibers lie
/// at infinite base distance.
pub fn submetry_check(f: &Morphism) -> Result<SubmetryReport> {
    let (x, b) = (f.dom(), f.cod());
    let fibers = f.fibers();
    for b0 in 0..b.len() {
        for b1 in (b0 + 1)..b.len() {
            if b.d(b0, b1).is_inf() && !fibers[b0].is_empty() && !fibers[b1].is_empty() {
                return Err(Error::InfiniteBaseDistance {
                    b0: b.label(b0).to_string(),
                    b1: b.label(b1).to_string(),
                });
            }
        }
    }
    let uncovered = f.uncovered();
    let surjective = uncovered.is_empty();

    let definition = surjective
        && (0..b.len()).all(|b0| {
            (0..b.len()).all(|b1| hausdorff(x, &fibers[b0], &fibers[b1]) <= *b.d(b0, b1))
        });

    let mut witness = None;
    'outer: for p in 0..x.len() {
        for t in 0..b.len() {
            let near = fibers[t].iter().map(|&q| x.d(p, q)).min().cloned().unwrap_or(ExtValue::Inf);
            let want = b.d(f.apply(p), t);
            if near != *want {
                let deficit = near.checked_sub(want).unwrap_or(ExtValue::Inf);
                witness = Some(SubmetryWitness { point: p, target: t, deficit });
                break 'outer;
            }
        }
    }
    let fiber_min = surjective && witness.is_none();
    if witness.is_none() && !surjective {
        witness = Some(SubmetryWitness { point: 0, target: uncovered[0], deficit: ExtValue::Inf });
    }

    let radii = breakpoint_radii(&[x, b]);
    let ball_ok = surjective
        && (0..x.len()).all(|p| {
            radii.iter().all(|r| {
                let up = ball(x, p, r);
                let down = ball(b, f.apply(p), r);
                let mut image = vec![false; b.len()];
                for (q, inside) in up.iter().enumerate() {
                    if *inside {
                        image[f.apply(q)] = true;
                    }
                }
                image == down
            })
        });

    Ok(SubmetryReport { verdict: definition, surjective, definition, fiber_min, ball: ball_ok, witness })
}

/// A proper family `p: P -> B`: surjective submetry with finite fibers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    projection: Morphism,
    fibers: Vec<Vec<usize>>,
}

/// Accepts `p` as a proper family, or reports why not.
pub fn proper_family_check(p: &Morphism) -> Result<Family> {
    let uncovered = p.uncovered();
    if !uncovered.is_empty() {
        return Err(Error::NotSurjective {
            uncovered: uncovered.iter().map(|&b| p.cod().label(b).to_string()).collect(),
        });
    }
    let report = submetry_check(p)?;
    if !report.verdict {
        let w = report.witness.expect("failed check has a witness");
        return Err(Error::NotSubmetry {
            point: p.dom().label(w.point).to_string(),
            target: p.cod().label(w.target).to_string(),
            deficit: w.deficit,
        });
    }
    Ok(Family { fibers: p.fibers(), projection: p.clone() })
}

impl Family {
    pub fn projection(&self) -> &Morphism {
        &self.projection
    }

    pub fn total(&self) -> &Arc<FinSpace> {
        self.projection.dom()
    }

    pub fn base(&self) -> &Arc<FinSpace> {
        self.projection.cod()
    }

    pub fn fiber(&self, b: usize) -> &[usize] {
        &self.fibers[b]
    }

    /// The fiber over `b` as a space, with the indices of its points in the
    /// total space.
    pub fn fiber_space(&self, b: usize) -> (Arc<FinSpace>, Vec<usize>) {
        let (s, idx) = self.total().subspace(&self.fibers[b]).expect("proper fibers are nonempty");
        (Arc::new(s), idx)
    }
}

/// `Cpt(X/B)`: nonempty subsets of `X` over a single base point, with the
/// Hausdorff distance.
#[derive(Clone, Debug)]
pub struct Hyperspace {
    base_map: Morphism,
    space: Arc<FinSpace>,
    members: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, usize>,
    fiber_map: Morphism,
}

/// Enumerates `Cpt(X/B)` for `f: X -> B`. The absolute hyperspace is the
/// case of a one-point base.
pub fn hyperspace(f: &Morphism, cap: u128) -> Result<Hyperspace> {
    let x = f.dom();
    let fibers = f.fibers();
    let size: u128 = fibers
        .iter()
        .map(|fb| 1u128.checked_shl(fb.len() as u32).unwrap_or(u128::MAX) - 1)
        .fold(0u128, |a, b| a.saturating_add(b));
    if size > cap {
        return Err(Error::TooLarge { size, cap });
    }
    let mut subsets = Vec::new();
    let mut over = Vec::new();
    for (b, fb) in fibers.iter().enumerate() {
        for mask in 1u64..(1u64 << fb.len()) {
            let set: Vec<usize> = (0..fb.len()).filter(|k| mask >> k & 1 == 1).map(|k| fb[k]).collect();
            subsets.push(set);
            over.push(b);
        }
    }
    let labels = subsets.iter().map(|s| label::subset(s.iter().map(|&i| x.label(i)))).collect();
    let (space, pos) = FinSpace::from_fn(labels, |i, j| hausdorff(x, &subsets[i], &subsets[j]))?;
    let space = Arc::new(space);
    let mut members = vec![Vec::new(); subsets.len()];
    let mut fmap = vec![0; subsets.len()];
    for (k, s) in subsets.into_iter().enumerate() {
        fmap[pos[k]] = over[k];
        members[pos[k]] = s;
    }
    let lookup = members.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let fiber_map = Morphism::new(space.clone(), f.cod().clone(), fmap)?;
    Ok(Hyperspace { base_map: f.clone(), space, members, lookup, fiber_map })
}

impl Hyperspace {
    pub fn space(&self) -> &Arc<FinSpace> {
        &self.space
    }

    pub fn fiber_map(&self) -> &Morphism {
        &self.fiber_map
    }

    pub fn base_map(&self) -> &Morphism {
        &self.base_map
    }

    /// Members (indices into `X`) of the hyperspace point `a`.
    pub fn members(&self, a: usize) -> &[usize] {
        &self.members[a]
    }

    pub fn index_of_subset(&self, members: &[usize]) -> Option<usize> {
        let mut key = members.to_vec();
        key.sort_unstable();
        key.dedup();
        self.lookup.get(&key).copied()
    }

    /// `x ↦ {x}`.
    pub fn singleton_embedding(&self) -> Morphism {
        let x = self.base_map.dom();
        let map = (0..x.len()).map(|i| self.lookup[&vec![i]]).collect();
        Morphism::new(x.clone(), self.space.clone(), map).expect("singletons embed isometrically")
    }
}

/// A proper family whose total space sits inside `X ×_B T`: `to_x` is the
/// first coordinate, the family projection the second.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubFamily {
    pub family: Family,
    pub to_x: Morphism,
}

impl SubFamily {
    /// The total space as `(x, t)` index pairs.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let p = self.family.projection();
        (0..p.dom().len()).map(|a| (self.to_x.apply(a), p.apply(a))).collect()
    }
}

/// `g: T -> Cpt(X/B)` to the family `A_T = {(x,t) | x ∈ g(t)} -> T`.
pub fn map_to_family(hyp: &Hyperspace, g: &Morphism) -> Result<SubFamily> {
    if g.cod() != hyp.space() {
        return Err(Error::DomainMismatch("map does not land in the hyperspace".into()));
    }
    let x = hyp.base_map.dom();
    let t = g.dom();
    let pairs: Vec<(usize, usize)> = (0..t.len())
        .flat_map(|ti| hyp.members(g.apply(ti)).iter().map(move |&xi| (xi, ti)))
        .collect();
    let span = product_on(x, t, &pairs)?;
    let family = proper_family_check(&span.right)?;
    Ok(SubFamily { family, to_x: span.left })
}

/// A proper family presented inside `X ×_B T` back to `T -> Cpt(X/B)`,
/// `t ↦` (fiber over `t` projected to `X`).
pub fn family_to_map(hyp: &Hyperspace, fam: &SubFamily) -> Result<Morphism> {
    let p = fam.family.projection();
    let e = &fam.to_x;
    let x = hyp.base_map.dom();
    if e.dom() != p.dom() || e.cod() != x {
        return Err(Error::DomainMismatch("embedding does not map the total space into X".into()));
    }
    let (total, t) = (p.dom(), p.cod());
    for a in 0..total.len() {
        for b in 0..total.len() {
            let sup = x.d(e.apply(a), e.apply(b)).max(t.d(p.apply(a), p.apply(b)));
            if total.d(a, b) != sup || (a != b && e.apply(a) == e.apply(b) && p.apply(a) == p.apply(b)) {
                return Err(Error::NotProper(format!(
                    "total space is not a subspace of X × T at ({}, {})",
                    total.label(a),
                    total.label(b)
                )));
            }
        }
    }
    let mut map = Vec::with_capacity(t.len());
    for ti in 0..t.len() {
        let set: Vec<usize> = fam.family.fiber(ti).iter().map(|&a| e.apply(a)).collect();
        let idx = hyp.index_of_subset(&set).ok_or_else(|| {
            Error::NotProper(format!("fiber over {} is not over a single base point", t.label(ti)))
        })?;
        map.push(idx);
    }
    Morphism::new(t.clone(), hyp.space.clone(), map)
}

/// A proper family `P -> X` with sections `s_1..s_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedFamily {
    family: Family,
    sections: Vec<Morphism>,
}

impl PointedFamily {
    pub fn new(family: Family, sections: Vec<Morphism>) -> Result<PointedFamily> {
        let p = family.projection();
        for (k, s) in sections.iter().enumerate() {
            if s.dom() != p.cod() || s.cod() != p.dom() {
                return Err(Error::NotSection(format!("section {k} has the wrong spaces")));
            }
            if let Some(x) = (0..s.dom().len()).find(|&x| p.apply(s.apply(x)) != x) {
                return Err(Error::NotSection(format!(
                    "section {k} sends {} outside its fiber",
                    s.dom().label(x)
                )));
            }
        }
        Ok(PointedFamily { family, sections })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn sections(&self) -> &[Morphism] {
        &self.sections
    }
}

/// Base change of a pointed family along `f: T -> X`. Total points are
/// pairs `(a, t)` with `p(a) = f(t)`; sections act coordinatewise.
pub fn pointed_pullback(fam: &PointedFamily, f: &Morphism) -> Result<PointedFamily> {
    let p = fam.family.projection();
    let span = fiber_product(p, f)?;
    let family = proper_family_check(&span.right)?;
    let total = &span.space;
    let (pspace, t) = (p.dom(), f.dom());
    let pulled = |s: &Morphism| -> Result<Morphism> {
        let map = (0..t.len())
            .map(|ti| {
                let a = s.apply(f.apply(ti));
                total.index_of(&label::pair(pspace.label(a), t.label(ti))).expect("compatible pair")
            })
            .collect();
        Morphism::new(t.clone(), total.clone(), map)
    };
    let sections = fam.sections.iter().map(pulled).collect::<Result<Vec<_>>>()?;
    PointedFamily::new(family, sections)
}

/// Pulls the family back along its own projection and adds the diagonal
/// section `t ↦ (t, t)`.
///
/// The base coordinate of each total point is its second component, as in
/// [`pointed_pullback`].
pub fn diagonal_family(fam: &PointedFamily) -> Result<PointedFamily> {
    let p = fam.family.projection();
    let pulled = pointed_pullback(fam, p)?;
    let total = pulled.family.total().clone();
    let base = p.dom();
    let diag = (0..base.len())
        .map(|a| total.index_of(&label::pair(base.label(a), base.label(a))).expect("diagonal pair"))
        .collect();
    let diag = Morphism::new(base.clone(), total, diag)?;
    let mut sections = pulled.sections;
    sections.push(diag);
    PointedFamily::new(pulled.family, sections)
}
