//! Effective descent: gluing charts over a covering along transitions.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::Covering;
use crate::error::{Error, Result};
use crate::limits::{classes_of, fiber_product};
use crate::morphism::Morphism;
use crate::space::{label, FinSpace};
use crate::value::ExtValue;

/// Overlap points `(a, u, v)`: `a` a chart point over `u`, `(u, v)` in
/// `U_i ×_X U_j`. The transition `(i, j)` sends such a point of chart `i` to
/// the point `(b, u, v)` of chart `j`.
pub type Transition = BTreeMap<(usize, usize, usize), (usize, usize, usize)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentDatum {
    covering: Covering,
    charts: Vec<Morphism>,
    transitions: BTreeMap<(usize, usize), Transition>,
}

impl DescentDatum {
    pub fn new(
        covering: Covering,
        charts: Vec<Morphism>,
        transitions: BTreeMap<(usize, usize), Transition>,
    ) -> Result<DescentDatum> {
        let legs = covering.legs();
        if charts.len() != legs.len() {
            return Err(Error::DomainMismatch(format!("{} charts for {} legs", charts.len(), legs.len())));
        }
        for (i, (chart, leg)) in charts.iter().zip(legs).enumerate() {
            if chart.cod() != leg.dom() {
                return Err(Error::DomainMismatch(format!("chart {i} does not lie over leg {i}")));
            }
        }
        for (&(i, j), t) in &transitions {
            if i >= legs.len() || j >= legs.len() {
                return Err(Error::DomainMismatch(format!("transition ({i},{j}) names a missing leg")));
            }
            let fits = |&(a, u, v): &(usize, usize, usize), c: usize| {
                a < charts[c].dom().len() && u < legs[i].dom().len() && v < legs[j].dom().len()
            };
            if t.iter().any(|(s, d)| !fits(s, i) || !fits(d, j)) {
                return Err(Error::DomainMismatch(format!("transition ({i},{j}) index out of range")));
            }
        }
        Ok(DescentDatum { covering, charts, transitions })
    }

    /// Builds transitions from `"(p|u|v)"` label pairs.
    pub fn from_labels(
        covering: Covering,
        charts: Vec<Morphism>,
        pairs: &BTreeMap<(usize, usize), Vec<(String, String)>>,
    ) -> Result<DescentDatum> {
        let shell = DescentDatum::new(covering, charts, BTreeMap::new())?;
        let n = shell.charts.len();
        let mut transitions = BTreeMap::new();
        for (&(i, j), list) in pairs {
            if i >= n || j >= n {
                return Err(Error::DomainMismatch(format!("transition ({i},{j}) names a missing leg")));
            }
            let lookup = |on_j: bool| -> HashMap<String, (usize, usize, usize)> {
                let side = if on_j { j } else { i };
                shell.overlap(i, j, on_j).into_iter().map(|t| (shell.label_of(side, i, j, t), t)).collect()
            };
            let (src, dst) = (lookup(false), lookup(true));
            let context = format!("transition {i},{j}");
            let mut t = Transition::new();
            for (a, b) in list {
                let s = *src.get(a).ok_or_else(|| Error::UnknownPoint { label: a.clone(), context: context.clone() })?;
                let d = *dst.get(b).ok_or_else(|| Error::UnknownPoint { label: b.clone(), context: context.clone() })?;
                if t.insert(s, d).is_some() {
                    return Err(Error::NotBijective(format!("{context}: {a} listed twice")));
                }
            }
            transitions.insert((i, j), t);
        }
        DescentDatum::new(shell.covering, shell.charts, transitions)
    }

    pub fn covering(&self) -> &Covering {
        &self.covering
    }

    pub fn charts(&self) -> &[Morphism] {
        &self.charts
    }

    pub fn transitions(&self) -> &BTreeMap<(usize, usize), Transition> {
        &self.transitions
    }

    /// Transitions as `"(p|u|v)"` label pairs.
    pub fn transition_labels(&self) -> BTreeMap<(usize, usize), Vec<(String, String)>> {
        self.transitions
            .iter()
            .map(|(&(i, j), t)| {
                let list = t
                    .iter()
                    .map(|(&(a, u, v), &(b, u2, v2))| {
                        (self.label_of(i, i, j, (a, u, v)), self.label_of(j, i, j, (b, u2, v2)))
                    })
                    .collect();
                ((i, j), list)
            })
            .collect()
    }

    fn label_of(&self, chart: usize, i: usize, j: usize, (a, u, v): (usize, usize, usize)) -> String {
        let legs = self.covering.legs();
        label::tuple(&[self.charts[chart].dom().label(a), legs[i].dom().label(u), legs[j].dom().label(v)])
    }

    /// The points of `P_i ×_{U_i} (U_i ×_X U_j)`, or of
    /// `P_j ×_{U_j} (U_i ×_X U_j)` when `on_j`.
    fn overlap(&self, i: usize, j: usize, on_j: bool) -> Vec<(usize, usize, usize)> {
        let legs = self.covering.legs();
        let chart = &self.charts[if on_j { j } else { i }];
        let mut out = Vec::new();
        for u in 0..legs[i].dom().len() {
            for v in 0..legs[j].dom().len() {
                if legs[i].apply(u) != legs[j].apply(v) {
                    continue;
                }
                let over = if on_j { v } else { u };
                for a in chart.fiber(over) {
                    out.push((a, u, v));
                }
            }
        }
        out
    }

    /// Distance in `P_i ×_{U_i} (U_i ×_X U_j)` (`on_j` false) or in
    /// `P_j ×_{U_j} (U_i ×_X U_j)`; the chart's own leg coordinate is
    /// dominated by the chart distance.
    fn overlap_distance(&self, i: usize, j: usize, on_j: bool, s: (usize, usize, usize), t: (usize, usize, usize)) -> ExtValue {
        let legs = self.covering.legs();
        let (p, other, a, b) = if on_j {
            (self.charts[j].dom(), legs[i].dom(), s.1, t.1)
        } else {
            (self.charts[i].dom(), legs[j].dom(), s.2, t.2)
        };
        p.d(s.0, t.0).clone().max(other.d(a, b).clone())
    }
}

/// Verifies that every transition is an isometric bijection over its
/// overlap, that `φ_ii` is the identity over the diagonal and that
/// `φ_jk ∘ φ_ij = φ_ik` on triple overlaps.
pub fn check_cocycle(datum: &DescentDatum) -> Result<()> {
    let legs = datum.covering.legs();
    let n = legs.len();
    for i in 0..n {
        for j in 0..n {
            check_transition(datum, i, j)?;
        }
    }
    for i in 0..n {
        let t = &datum.transitions[&(i, i)];
        for (&(a, u, v), &image) in t {
            if u == v && image != (a, u, v) {
                return Err(Error::Cocycle { i, j: i, k: i, point: datum.label_of(i, i, i, (a, u, v)) });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                check_triple(datum, i, j, k)?;
            }
        }
    }
    Ok(())
}

fn check_transition(datum: &DescentDatum, i: usize, j: usize) -> Result<()> {
    let domain: BTreeSet<_> = datum.overlap(i, j, false).into_iter().collect();
    let codomain: BTreeSet<_> = datum.overlap(i, j, true).into_iter().collect();
    let Some(t) = datum.transitions.get(&(i, j)) else {
        if domain.is_empty() {
            return Ok(());
        }
        return Err(Error::MissingTransition { i, j });
    };
    let not_over = |p: String| Error::NotOverOverlap { i, j, point: p };
    for (s, d) in t {
        if !domain.contains(s) {
            return Err(not_over(datum.label_of(i, i, j, *s)));
        }
        if (d.1, d.2) != (s.1, s.2) || !codomain.contains(d) {
            return Err(not_over(datum.label_of(j, i, j, *d)));
        }
    }
    if let Some(s) = domain.iter().find(|s| !t.contains_key(s)) {
        return Err(Error::NotBijective(format!("transition {i},{j} misses {}", datum.label_of(i, i, j, *s))));
    }
    let image: BTreeSet<_> = t.values().collect();
    if image.len() != codomain.len() {
        return Err(Error::NotBijective(format!("transition {i},{j} is not a bijection")));
    }
    let entries: Vec<_> = t.iter().collect();
    for (x, (s0, d0)) in entries.iter().enumerate() {
        for (s1, d1) in &entries[x + 1..] {
            let before = datum.overlap_distance(i, j, false, **s0, **s1);
            let after = datum.overlap_distance(i, j, true, **d0, **d1);
            if before != after {
                return Err(Error::NotIsometry {
                    context: format!("transition {i},{j}"),
                    a: datum.label_of(i, i, j, **s0),
                    b: datum.label_of(i, i, j, **s1),
                    before,
                    after,
                });
            }
        }
    }
    Ok(())
}

fn check_triple(datum: &DescentDatum, i: usize, j: usize, k: usize) -> Result<()> {
    let legs = datum.covering.legs();
    let (ti, tj, tk) = (&datum.transitions, &legs[j], &legs[k]);
    for u in 0..legs[i].dom().len() {
        let x = legs[i].apply(u);
        for v in tj.fiber(x) {
            for w in tk.fiber(x) {
                for a in datum.charts[i].fiber(u) {
                    let b = ti[&(i, j)][&(a, u, v)].0;
                    let c = ti[&(j, k)][&(b, v, w)].0;
                    let direct = ti[&(i, k)][&(a, u, w)].0;
                    if c != direct {
                        let point = label::tuple(&[
                            datum.charts[i].dom().label(a),
                            legs[i].dom().label(u),
                            legs[j].dom().label(v),
                            legs[k].dom().label(w),
                        ]);
                        return Err(Error::Cocycle { i, j, k, point });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Result of [`glue_descent`].
#[derive(Clone, Debug)]
pub struct GluedSpace {
    pub total: Arc<FinSpace>,
    pub projection: Morphism,
    /// `P_i -> P`.
    pub chart_maps: Vec<Morphism>,
    /// `P_i -> P ×_X U_i`, each an isometry.
    pub chart_isos: Vec<Morphism>,
}

/// Glues the charts of a descent datum into a space over the base.
///
/// Distances are the minimum over single charts containing representatives
/// of both points.
pub fn glue_descent(datum: &DescentDatum) -> Result<GluedSpace> {
    check_cocycle(datum)?;
    let charts = &datum.charts;
    let legs = datum.covering.legs();
    let base = datum.covering.base();
    let offsets: Vec<usize> = charts
        .iter()
        .scan(0, |acc, c| {
            let o = *acc;
            *acc += c.dom().len();
            Some(o)
        })
        .collect();
    let total_len = offsets.last().unwrap() + charts.last().unwrap().dom().len();
    let edges = datum.transitions.iter().flat_map(|(&(i, j), t)| {
        let offsets = &offsets;
        t.iter().map(move |(s, d)| (offsets[i] + s.0, offsets[j] + d.0))
    });
    let class = classes_of(total_len, edges);

    // classes in order of their least (chart, label) member
    let mut reps: Vec<usize> = Vec::new();
    let mut class_index = HashMap::new();
    let mut members: Vec<Vec<(usize, usize)>> = Vec::new();
    for (i, chart) in charts.iter().enumerate() {
        for a in 0..chart.dom().len() {
            let root = class[offsets[i] + a];
            let c = *class_index.entry(root).or_insert_with(|| {
                reps.push(offsets[i] + a);
                members.push(Vec::new());
                reps.len() - 1
            });
            members[c].push((i, a));
        }
    }
    let locate = |flat: usize| {
        let i = offsets.iter().rposition(|&o| o <= flat).unwrap();
        (i, flat - offsets[i])
    };
    let labels: Vec<String> = reps
        .iter()
        .map(|&r| {
            let (i, a) = locate(r);
            label::tagged(i, charts[i].dom().label(a))
        })
        .collect();
    let m = members.len();
    let mut dist = vec![ExtValue::Inf; m * m];
    for c0 in 0..m {
        for c1 in 0..m {
            let mut best = ExtValue::Inf;
            for &(i, a) in &members[c0] {
                for &(j, b) in &members[c1] {
                    if i == j {
                        best = best.min(charts[i].dom().d(a, b).clone());
                    }
                }
            }
            dist[c0 * m + c1] = best;
        }
    }
    let (total, pos) = FinSpace::from_fn_checked(labels, |a, b| dist[a * m + b].clone())?;
    let total = Arc::new(total);

    let mut proj = vec![0; m];
    for (c, ms) in members.iter().enumerate() {
        let (i, a) = ms[0];
        proj[pos[c]] = legs[i].apply(charts[i].apply(a));
    }
    let projection = Morphism::new(total.clone(), base.clone(), proj)?;

    let mut chart_maps = Vec::new();
    let mut chart_isos = Vec::new();
    for (i, chart) in charts.iter().enumerate() {
        let to_p: Vec<usize> =
            (0..chart.dom().len()).map(|a| pos[class_index[&class[offsets[i] + a]]]).collect();
        let g = Morphism::new(chart.dom().clone(), total.clone(), to_p)?;
        let span = fiber_product(&projection, &legs[i])?;
        let index: HashMap<(usize, usize), usize> =
            (0..span.space.len()).map(|q| ((span.left.apply(q), span.right.apply(q)), q)).collect();
        let iso: Vec<usize> = (0..chart.dom().len()).map(|a| index[&(g.apply(a), chart.apply(a))]).collect();
        let iso = Morphism::new(chart.dom().clone(), span.space.clone(), iso)?;
        if let Some(e) = isometry_failure(&iso, &format!("chart {i}")) {
            return Err(e);
        }
        chart_maps.push(g);
        chart_isos.push(iso);
    }
    Ok(GluedSpace { total, projection, chart_maps, chart_isos })
}

fn isometry_failure(f: &Morphism, context: &str) -> Option<Error> {
    if f.is_isometry() {
        return None;
    }
    let (dom, cod) = (f.dom(), f.cod());
    let n = dom.len();
    for a in 0..n {
        for b in a..n {
            let after = cod.d(f.apply(a), f.apply(b));
            if dom.d(a, b) != after || (a != b && f.apply(a) == f.apply(b)) {
                return Some(Error::NotIsometry {
                    context: context.to_string(),
                    a: dom.label(a).to_string(),
                    b: dom.label(b).to_string(),
                    before: dom.d(a, b).clone(),
                    after: after.clone(),
                });
            }
        }
    }
    Some(Error::NotBijective(format!("{context}: not onto")))
}

/// Restricts `p: P -> X` to the legs of `cov`, with the canonical
/// transitions `(x, u) ↦ (x, v)`.
pub fn decompose(p: &Morphism, cov: &Covering) -> Result<DescentDatum> {
    if p.cod() != cov.base() {
        return Err(Error::DomainMismatch("family does not lie over the covered space".into()));
    }
    let spans = cov.legs().iter().map(|leg| fiber_product(p, leg)).collect::<Result<Vec<_>>>()?;
    let index: Vec<HashMap<(usize, usize), usize>> = spans
        .iter()
        .map(|s| (0..s.space.len()).map(|q| ((s.left.apply(q), s.right.apply(q)), q)).collect())
        .collect();
    let charts: Vec<Morphism> = spans.iter().map(|s| s.right.clone()).collect();
    let shell = DescentDatum::new(cov.clone(), charts, BTreeMap::new())?;
    let n = spans.len();
    let mut transitions = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let t: Transition = shell
                .overlap(i, j, false)
                .into_iter()
                .map(|(a, u, v)| {
                    let x = spans[i].left.apply(a);
                    ((a, u, v), (index[j][&(x, v)], u, v))
                })
                .collect();
            if !t.is_empty() {
                transitions.insert((i, j), t);
            }
        }
    }
    DescentDatum::new(shell.covering, shell.charts, transitions)
}
