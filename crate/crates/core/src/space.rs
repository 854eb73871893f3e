//! Finite extended pseudometric spaces.

use std::collections::BTreeSet;

use crate::error::{Error, Result, SpaceViolation};
use crate::value::ExtValue;

/// A finite extended pseudometric space.
///
/// Points are distinct string labels stored in lexicographic order, and the
/// distance matrix is indexed by that order. Construction goes through
/// [`validate_space`] or one of the checked builders, so every value of this
/// type satisfies zero diagonal, symmetry and the `∞`-absorbing triangle
/// inequality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinSpace {
    labels: Vec<String>,
    dist: Vec<ExtValue>,
}

/// Which of the two degeneracies a space avoids.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpaceClass {
    /// No zero distance between distinct points.
    pub is_metric: bool,
    /// No infinite distance.
    pub is_pseudo: bool,
}

impl SpaceClass {
    /// Metric in the strict sense: both extended-metric and pseudometric.
    pub fn is_finite_metric(&self) -> bool {
        self.is_metric && self.is_pseudo
    }
}

fn axiom_violations(n: usize, d: impl Fn(usize, usize) -> ExtValue) -> Vec<SpaceViolation> {
    let mut out = Vec::new();
    for i in 0..n {
        let v = d(i, i);
        if !v.is_zero() {
            out.push(SpaceViolation::NonzeroDiagonal { i, value: v });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if d(i, j) != d(j, i) {
                out.push(SpaceViolation::Asymmetric { i, j });
            }
        }
    }
    for i in 0..n {
        for k in 0..n {
            if i == k {
                continue;
            }
            let dik = d(i, k);
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                if dik > &d(i, j) + &d(j, k) {
                    out.push(SpaceViolation::Triangle { i, k, j });
                }
            }
        }
    }
    out
}

/// Checks a raw matrix and returns the canonical space with its class.
///
/// Every violated constraint is reported, with indices in input order.
pub fn validate_space(points: Vec<String>, matrix: Vec<Vec<ExtValue>>) -> Result<(FinSpace, SpaceClass)> {
    let n = points.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    if matrix.len() != n {
        return Err(Error::Shape { rows: n, row: matrix.len(), len: matrix.len() });
    }
    if let Some((row, r)) = matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(Error::Shape { rows: n, row, len: r.len() });
    }
    let violations = axiom_violations(n, |i, j| matrix[i][j].clone());
    if !violations.is_empty() {
        return Err(Error::InvalidSpace(violations));
    }
    let (space, _) = FinSpace::from_fn(points, |i, j| matrix[i][j].clone())?;
    let class = space.class();
    Ok((space, class))
}

impl FinSpace {
    /// Builds a space from labels in arbitrary order, sorting them.
    ///
    /// Returns the space and the map from input index to canonical index.
    /// Only labels are checked here; callers that cannot guarantee the metric
    /// axioms use [`FinSpace::from_fn_checked`].
    pub(crate) fn from_fn(
        labels: Vec<String>,
        d: impl Fn(usize, usize) -> ExtValue,
    ) -> Result<(FinSpace, Vec<usize>)> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| labels[a].cmp(&labels[b]));
        for w in order.windows(2) {
            if labels[w[0]] == labels[w[1]] {
                return Err(Error::DuplicatePoint(labels[w[0]].clone()));
            }
        }
        let mut position = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let mut dist = Vec::with_capacity(n * n);
        for &a in &order {
            for &b in &order {
                dist.push(if a == b { ExtValue::zero() } else { d(a, b) });
            }
        }
        let sorted = order.iter().map(|&i| labels[i].clone()).collect();
        Ok((FinSpace { labels: sorted, dist }, position))
    }

    /// Like [`FinSpace::from_fn`] but also asserts the metric axioms, mapping
    /// a failure to [`Error::TriangleViolation`] since constructions that use
    /// it are supposed to produce valid spaces.
    pub(crate) fn from_fn_checked(
        labels: Vec<String>,
        d: impl Fn(usize, usize) -> ExtValue,
    ) -> Result<(FinSpace, Vec<usize>)> {
        let (space, pos) = FinSpace::from_fn(labels, d)?;
        space.assert_axioms()?;
        Ok((space, pos))
    }

    pub(crate) fn assert_axioms(&self) -> Result<()> {
        let n = self.len();
        match axiom_violations(n, |i, j| self.d(i, j).clone()).first() {
            None => Ok(()),
            Some(SpaceViolation::Triangle { i, k, j }) => Err(Error::TriangleViolation {
                a: self.labels[*i].clone(),
                b: self.labels[*j].clone(),
                c: self.labels[*k].clone(),
            }),
            Some(v) => Err(Error::InvalidSpace(vec![v.clone()])),
        }
    }

    /// The one-point space `{*}`.
    pub fn point() -> FinSpace {
        FinSpace { labels: vec!["*".to_string()], dist: vec![ExtValue::zero()] }
    }

    /// The two-point space `2_r = {0, r}` with points labelled `"0"` and the
    /// literal of `r`.
    pub fn two_point(r: &ExtValue) -> Result<FinSpace> {
        if !r.is_finite() || r.is_zero() {
            return Err(Error::DegenerateRadius(r.clone()));
        }
        // "0" sorts before any other canonical literal
        Ok(FinSpace {
            labels: vec!["0".to_string(), r.to_string()],
            dist: vec![ExtValue::zero(), r.clone(), r.clone(), ExtValue::zero()],
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.binary_search_by(|l| l.as_str().cmp(label)).ok()
    }

    /// Like [`FinSpace::index_of`] but reports an unknown label.
    pub fn require(&self, label: &str, context: &str) -> Result<usize> {
        self.index_of(label).ok_or_else(|| Error::UnknownPoint {
            label: label.to_string(),
            context: context.to_string(),
        })
    }

    pub fn d(&self, i: usize, j: usize) -> &ExtValue {
        &self.dist[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[ExtValue] {
        let n = self.len();
        &self.dist[i * n..(i + 1) * n]
    }

    pub fn class(&self) -> SpaceClass {
        let n = self.len();
        let mut class = SpaceClass { is_metric: true, is_pseudo: true };
        for i in 0..n {
            for j in 0..n {
                if i != j && self.d(i, j).is_zero() {
                    class.is_metric = false;
                }
                if self.d(i, j).is_inf() {
                    class.is_pseudo = false;
                }
            }
        }
        class
    }

    pub fn diameter(&self) -> ExtValue {
        ExtValue::max_of(&self.dist)
    }

    /// Distinct positive finite distances, ascending.
    pub fn distance_values(&self) -> BTreeSet<ExtValue> {
        self.dist.iter().filter(|v| v.is_finite() && !v.is_zero()).cloned().collect()
    }

    /// The subspace on `members` (any order, duplicates ignored). Returns the
    /// subspace and, for each subspace point, its index in `self`.
    pub fn subspace(&self, members: &[usize]) -> Result<(FinSpace, Vec<usize>)> {
        let set: BTreeSet<usize> = members.iter().copied().collect();
        if set.is_empty() {
            return Err(Error::Empty);
        }
        let idx: Vec<usize> = set.into_iter().collect();
        // sorted indices of a sorted label list stay sorted
        let labels = idx.iter().map(|&i| self.labels[i].clone()).collect();
        let mut dist = Vec::with_capacity(idx.len() * idx.len());
        for &a in &idx {
            for &b in &idx {
                dist.push(self.d(a, b).clone());
            }
        }
        Ok((FinSpace { labels, dist }, idx))
    }

    /// Distance matrix as nested rows, in canonical order.
    pub fn matrix(&self) -> Vec<Vec<ExtValue>> {
        (0..self.len()).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Label construction for derived spaces.
///
/// Tuple components are escaped so that distinct tuples never share a
/// label: `(a|b)` for pairs, `(p|u|v)` for triples.
pub mod label {
    fn escape_into(out: &mut String, s: &str, specials: &[char]) {
        for c in s.chars() {
            if c == '\\' || specials.contains(&c) {
                out.push('\\');
            }
            out.push(c);
        }
    }

    pub fn tuple(parts: &[&str]) -> String {
        let mut out = String::from("(");
        for (k, p) in parts.iter().enumerate() {
            if k > 0 {
                out.push('|');
            }
            escape_into(&mut out, p, &['|', '(', ')']);
        }
        out.push(')');
        out
    }

    pub fn pair(a: &str, b: &str) -> String {
        tuple(&[a, b])
    }

    /// Sorted member labels joined by `|`.
    pub fn subset<'a>(members: impl IntoIterator<Item = &'a str>) -> String {
        let mut out = String::new();
        for (k, m) in members.into_iter().enumerate() {
            if k > 0 {
                out.push('|');
            }
            escape_into(&mut out, m, &['|']);
        }
        out
    }

    /// `i:label`, naming a point of the `i`-th summand of a disjoint union.
    pub fn tagged(i: usize, l: &str) -> String {
        format!("{i}:{l}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> ExtValue {
        s.parse().unwrap()
    }

    fn m(rows: &[&[&str]]) -> Vec<Vec<ExtValue>> {
        rows.iter().map(|r| r.iter().map(|s| v(s)).collect()).collect()
    }

    fn pts(ls: &[&str]) -> Vec<String> {
        ls.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn two_point_space_is_metric() {
        let (s, class) = validate_space(pts(&["0", "1"]), m(&[&["0", "1"], &["1", "0"]])).unwrap();
        assert_eq!(s.len(), 2);
        assert!(class.is_metric && class.is_pseudo);
        assert_eq!(s, FinSpace::two_point(&v("1")).unwrap());
    }

    #[test]
    fn triangle_violation_reports_triple() {
        let err = validate_space(
            pts(&["a", "b", "c"]),
            m(&[&["0", "1", "5"], &["1", "0", "1"], &["5", "1", "0"]]),
        )
        .unwrap_err();
        let Error::InvalidSpace(vs) = err else { panic!() };
        assert_eq!(vs[0], SpaceViolation::Triangle { i: 0, k: 2, j: 1 });
        assert!(vs.iter().all(|v| v.code() == "E_TRIANGLE"));
    }

    #[test]
    fn infinite_distances_give_extended_space() {
        let (_, class) = validate_space(pts(&["a", "b"]), m(&[&["0", "inf"], &["inf", "0"]])).unwrap();
        assert!(class.is_metric);
        assert!(!class.is_pseudo);
    }

    #[test]
    fn reports_every_violation() {
        let err = validate_space(pts(&["a", "b"]), m(&[&["1", "2"], &["3", "0"]])).unwrap_err();
        let Error::InvalidSpace(vs) = err else { panic!() };
        let codes: Vec<_> = vs.iter().map(|v| v.code()).collect();
        assert!(codes.contains(&"E_NONZERO_DIAGONAL"));
        assert!(codes.contains(&"E_ASYMMETRIC"));
    }

    #[test]
    fn shape_and_label_errors() {
        assert!(matches!(validate_space(vec![], vec![]), Err(Error::Empty)));
        assert!(matches!(
            validate_space(pts(&["a", "b"]), m(&[&["0", "1"], &["1"]])),
            Err(Error::Shape { .. })
        ));
        assert!(matches!(
            validate_space(pts(&["a", "a"]), m(&[&["0", "1"], &["1", "0"]])),
            Err(Error::DuplicatePoint(_))
        ));
    }

    #[test]
    fn canonical_order_permutes_matrix() {
        let (s, _) = validate_space(
            pts(&["c", "a", "b"]),
            m(&[&["0", "1", "2"], &["1", "0", "3"], &["2", "3", "0"]]),
        )
        .unwrap();
        assert_eq!(s.labels(), &["a", "b", "c"]);
        let (a, c) = (s.index_of("a").unwrap(), s.index_of("c").unwrap());
        assert_eq!(s.d(a, c), &v("1"));
        assert_eq!(s.d(s.index_of("b").unwrap(), a), &v("3"));
    }

    #[test]
    fn tuple_labels_are_unambiguous() {
        assert_eq!(label::pair("a", "b"), "(a|b)");
        assert_ne!(label::pair("a|b", "c"), label::pair("a", "b|c"));
        assert_eq!(label::subset(["a", "b"]), "a|b");
        assert_ne!(label::subset(["a|b"]), label::subset(["a", "b"]));
    }
}
