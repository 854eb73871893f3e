//! Finite limits and colimits of extended pseudometric spaces, metric
//! identification and quotients by isometric group actions.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::space::{label, FinSpace};
use crate::value::ExtValue;

/// Default cap on the number of materialized group elements.
pub const DEFAULT_GROUP_CAP: usize = 10_000;

/// A space with its two projections, as produced by products and fiber
/// products.
#[derive(Clone, Debug)]
pub struct Span {
    pub space: Arc<FinSpace>,
    pub left: Morphism,
    pub right: Morphism,
}

/// Builds the subspace of `X × Y` on `pairs` with the sup distance.
pub(crate) fn product_on(x: &Arc<FinSpace>, y: &Arc<FinSpace>, pairs: &[(usize, usize)]) -> Result<Span> {
    let labels = pairs.iter().map(|&(a, b)| label::pair(x.label(a), y.label(b))).collect();
    let (space, pos) = FinSpace::from_fn(labels, |i, j| {
        let (a, b) = pairs[i];
        let (a2, b2) = pairs[j];
        x.d(a, a2).max(y.d(b, b2)).clone()
    })?;
    let space = Arc::new(space);
    let mut lmap = vec![0; pairs.len()];
    let mut rmap = vec![0; pairs.len()];
    for (k, &(a, b)) in pairs.iter().enumerate() {
        lmap[pos[k]] = a;
        rmap[pos[k]] = b;
    }
    Ok(Span {
        left: Morphism::new(space.clone(), x.clone(), lmap)?,
        right: Morphism::new(space.clone(), y.clone(), rmap)?,
        space,
    })
}

/// `X × Y` with `d((x,y),(x',y')) = max(d_X(x,x'), d_Y(y,y'))`.
pub fn l_infty_product(x: &Arc<FinSpace>, y: &Arc<FinSpace>) -> Result<Span> {
    let pairs: Vec<_> = (0..x.len()).flat_map(|a| (0..y.len()).map(move |b| (a, b))).collect();
    product_on(x, y, &pairs)
}

/// `dom f ×_B dom g`, the subspace of the product on pairs with equal image.
pub fn fiber_product(f: &Morphism, g: &Morphism) -> Result<Span> {
    if f.cod() != g.cod() {
        return Err(Error::DomainMismatch("fiber product over different bases".into()));
    }
    let pairs: Vec<_> = (0..f.dom().len())
        .flat_map(|a| (0..g.dom().len()).filter(move |&b| f.apply(a) == g.apply(b)).map(move |b| (a, b)))
        .collect();
    if pairs.is_empty() {
        return Err(Error::Empty);
    }
    product_on(f.dom(), g.dom(), &pairs)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }

    /// Keeps the smaller index as root so classes are named by their least
    /// member.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

pub(crate) fn classes_of(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut uf = UnionFind::new(n);
    for (a, b) in edges {
        uf.union(a, b);
    }
    (0..n).map(|x| uf.find(x)).collect()
}

/// Collapses zero-distance pairs. The projection preserves distances.
pub fn metric_identification(x: &Arc<FinSpace>) -> Result<(Arc<FinSpace>, Morphism)> {
    let n = x.len();
    let edges = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)));
    let edges: Vec<_> = edges.filter(|&(a, b)| x.d(a, b).is_zero()).collect();
    let root = classes_of(n, edges);
    let reps: Vec<usize> = (0..n).filter(|&a| root[a] == a).collect();
    let labels = reps.iter().map(|&r| x.label(r).to_string()).collect();
    let (q, pos) = FinSpace::from_fn(labels, |i, j| x.d(reps[i], reps[j]).clone())?;
    let q = Arc::new(q);
    let class_index: Vec<usize> = (0..n)
        .map(|a| pos[reps.binary_search(&root[a]).expect("root is a representative")])
        .collect();
    let proj = Morphism::new(x.clone(), q.clone(), class_index)?;
    Ok((q, proj))
}

/// A point of a summand in a disjoint union: `(space index, point index)`.
pub type Tagged = (usize, usize);

/// Result of [`colimit_glue`].
#[derive(Clone, Debug)]
pub struct Colimit {
    pub space: Arc<FinSpace>,
    pub injections: Vec<Morphism>,
}

/// Glues `spaces` along `identifications`.
///
/// Points are classes of the disjoint union under the generated equivalence,
/// named `i:label` after their least member. The distance is the infimum of
/// chain lengths, computed as all-pairs shortest paths over intra-space
/// edges and zero-weight identification edges.
pub fn colimit_glue(spaces: &[Arc<FinSpace>], identifications: &[(Tagged, Tagged)]) -> Result<Colimit> {
    if spaces.is_empty() {
        return Err(Error::Empty);
    }
    let offsets: Vec<usize> = spaces
        .iter()
        .scan(0, |acc, s| {
            let o = *acc;
            *acc += s.len();
            Some(o)
        })
        .collect();
    let total: usize = spaces.iter().map(|s| s.len()).sum();
    let flat = |(s, p): Tagged| -> Result<usize> {
        if s >= spaces.len() || p >= spaces[s].len() {
            return Err(Error::UnknownPoint {
                label: format!("{s}:{p}"),
                context: "identification".into(),
            });
        }
        Ok(offsets[s] + p)
    };
    let mut edges = Vec::with_capacity(identifications.len());
    for &(a, b) in identifications {
        edges.push((flat(a)?, flat(b)?));
    }
    let root = classes_of(total, edges);
    let reps: Vec<usize> = (0..total).filter(|&a| root[a] == a).collect();
    let class_of = |flat_pt: usize| reps.binary_search(&root[flat_pt]).expect("representative");
    let m = reps.len();

    let mut dist = vec![ExtValue::Inf; m * m];
    for c in 0..m {
        dist[c * m + c] = ExtValue::zero();
    }
    for (s, sp) in spaces.iter().enumerate() {
        for a in 0..sp.len() {
            for b in 0..sp.len() {
                let (ca, cb) = (class_of(offsets[s] + a), class_of(offsets[s] + b));
                let w = sp.d(a, b);
                if *w < dist[ca * m + cb] {
                    dist[ca * m + cb] = w.clone();
                }
            }
        }
    }
    for k in 0..m {
        for i in 0..m {
            if dist[i * m + k].is_inf() {
                continue;
            }
            for j in 0..m {
                let via = &dist[i * m + k] + &dist[k * m + j];
                if via < dist[i * m + j] {
                    dist[i * m + j] = via;
                }
            }
        }
    }

    let locate = |flat_pt: usize| -> (usize, usize) {
        let s = offsets.partition_point(|&o| o <= flat_pt) - 1;
        (s, flat_pt - offsets[s])
    };
    let labels = reps
        .iter()
        .map(|&r| {
            let (s, p) = locate(r);
            label::tagged(s, spaces[s].label(p))
        })
        .collect();
    let (space, pos) = FinSpace::from_fn(labels, |i, j| dist[i * m + j].clone())?;
    let space = Arc::new(space);
    let injections = spaces
        .iter()
        .enumerate()
        .map(|(s, sp)| {
            let map = (0..sp.len()).map(|p| pos[class_of(offsets[s] + p)]).collect();
            Morphism::new(sp.clone(), space.clone(), map)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Colimit { space, injections })
}

/// A finite group acting on a space by isometries, given by generators.
#[derive(Clone, Debug)]
pub struct GroupAction {
    space: Arc<FinSpace>,
    generators: Vec<Vec<usize>>,
}

impl GroupAction {
    /// Checks that every generator is an isometric bijection.
    pub fn new(space: Arc<FinSpace>, generators: Vec<Vec<usize>>) -> Result<GroupAction> {
        let n = space.len();
        for (gi, g) in generators.iter().enumerate() {
            let mut seen = vec![false; n];
            if g.len() != n || g.iter().any(|&y| y >= n || std::mem::replace(&mut seen[y], true)) {
                return Err(Error::NotBijective(format!("generator {gi}")));
            }
            for a in 0..n {
                for b in (a + 1)..n {
                    if space.d(a, b) != space.d(g[a], g[b]) {
                        return Err(Error::NotIsometry {
                            context: format!("generator {gi}"),
                            a: space.label(a).to_string(),
                            b: space.label(b).to_string(),
                            before: space.d(a, b).clone(),
                            after: space.d(g[a], g[b]).clone(),
                        });
                    }
                }
            }
        }
        Ok(GroupAction { space, generators })
    }

    pub fn from_morphisms(space: Arc<FinSpace>, gens: &[Morphism]) -> Result<GroupAction> {
        for g in gens {
            if g.dom() != &space || g.cod() != &space {
                return Err(Error::DomainMismatch("generator is not a self-map".into()));
            }
        }
        GroupAction::new(space, gens.iter().map(|g| g.map().to_vec()).collect())
    }

    pub fn space(&self) -> &Arc<FinSpace> {
        &self.space
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    /// All elements of the generated group, identity first, breadth-first.
    pub fn elements(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        let id: Vec<usize> = (0..self.space.len()).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
        let mut out = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(h) = queue.pop_front() {
            for g in &self.generators {
                let gh: Vec<usize> = h.iter().map(|&x| g[x]).collect();
                if seen.insert(gh.clone()) {
                    if out.len() >= cap {
                        return Err(Error::GroupTooLarge { cap });
                    }
                    out.push(gh.clone());
                    queue.push_back(gh);
                }
            }
        }
        Ok(out)
    }
}

/// `X/G` with `d(Gx, Gy) = min_g d(x, g y)`. Orbits are named by their least
/// label.
pub fn quotient_by_group(action: &GroupAction, cap: usize) -> Result<(Arc<FinSpace>, Morphism)> {
    let x = action.space();
    let group = action.elements(cap)?;
    let n = x.len();
    let root: Vec<usize> = (0..n).map(|a| group.iter().map(|g| g[a]).min().unwrap()).collect();
    let reps: Vec<usize> = (0..n).filter(|&a| root[a] == a).collect();
    let labels = reps.iter().map(|&r| x.label(r).to_string()).collect();
    let (q, pos) = FinSpace::from_fn(labels, |i, j| {
        group.iter().map(|g| x.d(reps[i], g[reps[j]])).min().unwrap().clone()
    })?;
    let q = Arc::new(q);
    let map = (0..n).map(|a| pos[reps.binary_search(&root[a]).unwrap()]).collect();
    let proj = Morphism::new(x.clone(), q.clone(), map)?;
    Ok((q, proj))
}
