//! 1-Lipschitz maps between finite spaces.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::space::FinSpace;

/// A total map `dom -> cod` that does not increase distances.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    dom: Arc<FinSpace>,
    cod: Arc<FinSpace>,
    map: Vec<usize>,
}

/// Checks a label-level map and returns the morphism.
///
/// Fails with the first (lexicographic) pair whose distance grows, or with
/// the first label that is missing from either space.
pub fn check_morphism(
    dom: Arc<FinSpace>,
    cod: Arc<FinSpace>,
    map: &BTreeMap<String, String>,
) -> Result<Morphism> {
    for k in map.keys() {
        dom.require(k, "map domain")?;
    }
    let mut idx = Vec::with_capacity(dom.len());
    for l in dom.labels() {
        let target = map.get(l).ok_or_else(|| Error::UnknownPoint {
            label: l.clone(),
            context: "map is not total".to_string(),
        })?;
        idx.push(cod.require(target, "map codomain")?);
    }
    Morphism::new(dom, cod, idx)
}

impl Morphism {
    pub fn new(dom: Arc<FinSpace>, cod: Arc<FinSpace>, map: Vec<usize>) -> Result<Morphism> {
        if map.len() != dom.len() || map.iter().any(|&y| y >= cod.len()) {
            return Err(Error::DomainMismatch("map does not fit its spaces".to_string()));
        }
        let f = Morphism { dom, cod, map };
        if let Some((a, b)) = f.lipschitz_witness() {
            return Err(Error::NotLipschitz {
                a: f.dom.label(a).to_string(),
                b: f.dom.label(b).to_string(),
                dom: f.dom.d(a, b).clone(),
                cod: f.cod.d(f.map[a], f.map[b]).clone(),
            });
        }
        Ok(f)
    }

    fn lipschitz_witness(&self) -> Option<(usize, usize)> {
        let n = self.dom.len();
        for a in 0..n {
            for b in (a + 1)..n {
                if self.dom.d(a, b) < self.cod.d(self.map[a], self.map[b]) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn identity(space: Arc<FinSpace>) -> Morphism {
        let map = (0..space.len()).collect();
        Morphism { dom: space.clone(), cod: space, map }
    }

    /// The unique map to the one-point space.
    pub fn to_point(dom: Arc<FinSpace>) -> Morphism {
        let map = vec![0; dom.len()];
        Morphism { dom, cod: Arc::new(FinSpace::point()), map }
    }

    pub fn constant(dom: Arc<FinSpace>, cod: Arc<FinSpace>, y: usize) -> Morphism {
        assert!(y < cod.len());
        let map = vec![y; dom.len()];
        Morphism { dom, cod, map }
    }

    pub fn dom(&self) -> &Arc<FinSpace> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinSpace> {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Morphism) -> Result<Morphism> {
        if *self.cod != *next.dom {
            return Err(Error::DomainMismatch("composite: codomain differs from domain".into()));
        }
        let map = self.map.iter().map(|&y| next.map[y]).collect();
        // composites of 1-Lipschitz maps stay 1-Lipschitz
        Ok(Morphism { dom: self.dom.clone(), cod: next.cod.clone(), map })
    }

    pub fn with_cod(&self, cod: Arc<FinSpace>) -> Result<Morphism> {
        Morphism::new(self.dom.clone(), cod, self.map.clone())
    }

    pub fn is_surjective(&self) -> bool {
        self.uncovered().is_empty()
    }

    pub fn uncovered(&self) -> Vec<usize> {
        let mut hit = vec![false; self.cod.len()];
        for &y in &self.map {
            hit[y] = true;
        }
        (0..hit.len()).filter(|&b| !hit[b]).collect()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn preserves_distances(&self) -> bool {
        let n = self.dom.len();
        (0..n).all(|a| (0..n).all(|b| self.dom.d(a, b) == self.cod.d(self.map[a], self.map[b])))
    }

    /// Bijective and distance-preserving.
    pub fn is_isometry(&self) -> bool {
        self.dom.len() == self.cod.len() && self.is_injective() && self.preserves_distances()
    }

    /// Inverse of an isometry.
    pub fn inverse(&self) -> Option<Morphism> {
        if !self.is_isometry() {
            return None;
        }
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Some(Morphism { dom: self.cod.clone(), cod: self.dom.clone(), map: inv })
    }

    pub fn fiber(&self, b: usize) -> Vec<usize> {
        (0..self.map.len()).filter(|&x| self.map[x] == b).collect()
    }

    /// Fibers over every codomain point (possibly empty).
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cod.len()];
        for (x, &b) in self.map.iter().enumerate() {
            out[b].push(x);
        }
        out
    }

    /// Restriction to the subspace on `members`; returns the restricted map
    /// and the inclusion of the subspace.
    pub fn restrict(&self, members: &[usize]) -> Result<(Morphism, Morphism)> {
        let (sub, idx) = self.dom.subspace(members)?;
        let sub = Arc::new(sub);
        let incl = Morphism { dom: sub.clone(), cod: self.dom.clone(), map: idx.clone() };
        let map = idx.iter().map(|&x| self.map[x]).collect();
        Ok((Morphism { dom: sub, cod: self.cod.clone(), map }, incl))
    }

    /// The map as label pairs.
    pub fn label_map(&self) -> BTreeMap<String, String> {
        self.map
            .iter()
            .enumerate()
            .map(|(x, &y)| (self.dom.label(x).to_string(), self.cod.label(y).to_string()))
            .collect()
    }
}
