//! Between documents and library values.

use std::sync::Arc;

use finmet::gh::{Correspondence, TwoPointFamily};
use finmet::lsm::{lsm_covering_check, Covering, DescentDatum};
use finmet::submetry::{proper_family_check, PointedFamily};
use finmet::{check_morphism, FinSpace, Morphism};

use crate::document::*;

pub type Lib<T> = finmet::Result<T>;

pub fn morphism(d: &MorphismDoc) -> Lib<Morphism> {
    check_morphism(d.dom.build()?, d.cod.build()?, &d.map)
}

pub fn arrow(d: &ArrowDoc, cod: &Arc<FinSpace>) -> Lib<Morphism> {
    check_morphism(d.dom.build()?, cod.clone(), &d.map)
}

pub fn covering(d: &CoveringDoc) -> Lib<Covering> {
    let base = d.base.build()?;
    let legs = d.legs.iter().map(|l| arrow(l, &base)).collect::<Lib<Vec<_>>>()?;
    lsm_covering_check(base, legs)
}

pub fn descent(d: &DescentDoc) -> Lib<DescentDatum> {
    let cov = covering(&CoveringDoc { base: d.base.clone(), legs: d.covering.clone() })?;
    if d.charts.len() != cov.legs().len() {
        return Err(finmet::Error::DomainMismatch(format!(
            "{} charts for {} legs",
            d.charts.len(),
            cov.legs().len()
        )));
    }
    let charts = d.charts.iter().zip(cov.legs()).map(|(c, leg)| arrow(c, leg.dom())).collect::<Lib<Vec<_>>>()?;
    DescentDatum::from_labels(cov, charts, &d.transitions)
}

/// The projection of a family document (not yet checked for properness).
pub fn projection(d: &FamilyDoc) -> Lib<Morphism> {
    check_morphism(d.total.build()?, d.base.build()?, &d.projection)
}

pub fn two_point_family(d: &FamilyDoc) -> Lib<TwoPointFamily> {
    TwoPointFamily::new(proper_family_check(&projection(d)?)?)
}

pub fn pointed(d: &PointedFamilyDoc) -> Lib<PointedFamily> {
    let p = projection(&d.family)?;
    let fam = proper_family_check(&p)?;
    let sections =
        d.sections.iter().map(|s| check_morphism(p.cod().clone(), p.dom().clone(), s)).collect::<Lib<Vec<_>>>()?;
    PointedFamily::new(fam, sections)
}

pub fn correspondence(d: &CorrespondenceDoc) -> Lib<Correspondence> {
    Correspondence::from_labels(d.left.build()?, d.right.build()?, &d.pairs)
}

// ---- to documents ----

pub fn space_doc(s: &FinSpace) -> SpaceDoc {
    SpaceDoc::from_space(s)
}

pub fn morphism_doc(f: &Morphism) -> MorphismDoc {
    MorphismDoc { dom: space_doc(f.dom()), cod: space_doc(f.cod()), map: f.label_map() }
}

pub fn arrow_doc(f: &Morphism) -> ArrowDoc {
    ArrowDoc { dom: space_doc(f.dom()), map: f.label_map() }
}

pub fn covering_doc(c: &Covering) -> CoveringDoc {
    CoveringDoc { base: space_doc(c.base()), legs: c.legs().iter().map(arrow_doc).collect() }
}

pub fn descent_doc(d: &DescentDatum) -> DescentDoc {
    let cov = d.covering();
    DescentDoc {
        base: space_doc(cov.base()),
        covering: cov.legs().iter().map(arrow_doc).collect(),
        charts: d.charts().iter().map(arrow_doc).collect(),
        transitions: d.transition_labels(),
    }
}

pub fn family_doc(p: &Morphism, embedding: Option<&Morphism>) -> FamilyDoc {
    FamilyDoc {
        total: space_doc(p.dom()),
        base: space_doc(p.cod()),
        projection: p.label_map(),
        embedding: embedding.map(Morphism::label_map),
    }
}

pub fn pointed_doc(p: &PointedFamily) -> PointedFamilyDoc {
    PointedFamilyDoc {
        family: family_doc(p.family().projection(), None),
        sections: p.sections().iter().map(Morphism::label_map).collect(),
    }
}

pub fn correspondence_doc(c: &Correspondence) -> CorrespondenceDoc {
    CorrespondenceDoc { left: space_doc(c.left()), right: space_doc(c.right()), pairs: c.label_pairs() }
}
