//! Twisted group cohomology of a finite presentation: H^0, Z^1, B^1, H^1 and
//! restriction maps to peripheral subgroups.
//!
//! Z^1 is cut out of V^{#generators} by the Fox matrix; B^1 is the image of
//! the coboundary map m -> (rho(x_j) m - m)_j. Peripheral cohomology is
//! computed on the standard torus / surface presentation with the restricted
//! representation, so everything stays inside the finite-presentation
//! framework.

use crate::error::{Error, Result};
use crate::group::{
    cocycle_value, fox_matrix, restrict_representation, validate_representation, GroupPresentation,
    PeripheralKind, Representation, Word,
};
use crate::linalg::{
    kernel_basis, rank_decision, CMatrix, CVector, RankDecision, ToleranceProfile, C64,
};
use serde::{Deserialize, Serialize};

/// A cocycle, stored as its values on the presentation generators.
#[derive(Debug, Clone)]
pub struct Cocycle {
    pub values: Vec<CVector>,
}

impl Cocycle {
    pub fn dim(&self) -> usize {
        self.values.first().map(|v| v.len()).unwrap_or(0)
    }

    fn from_stacked(col: nalgebra::DVectorView<C64>, generators: usize, dim: usize) -> Self {
        let values = (0..generators)
            .map(|g| CVector::from_iterator(dim, (0..dim).map(|i| col[g * dim + i])))
            .collect();
        Cocycle { values }
    }

    pub fn stacked(&self) -> CVector {
        let dim = self.dim();
        CVector::from_iterator(
            self.values.len() * dim,
            self.values.iter().flat_map(|v| v.iter().copied()),
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankGap {
    pub context: String,
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeripheralCohomology {
    pub index: usize,
    pub kind: String,
    pub dim_h0: usize,
    pub dim_z1: usize,
    pub dim_b1: usize,
    pub dim_h1: usize,
    /// Rank of the induced map H^1(M) -> H^1 of this peripheral subgroup.
    pub restriction_rank: usize,
}

/// Dimensions of H^0, Z^1, B^1, H^1 plus peripheral restriction data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub coefficients: String,
    pub dim_v: usize,
    pub dim_h0: usize,
    pub dim_z1: usize,
    pub dim_b1: usize,
    pub dim_h1: usize,
    pub peripherals: Vec<PeripheralCohomology>,
    /// Rank of H^1(M) -> direct sum of peripheral H^1.
    pub total_restriction_rank: usize,
    pub restriction_injective: bool,
    pub gaps: Vec<RankGap>,
    pub warnings: Vec<String>,
    pub tolerances: ToleranceProfile,
}

const GAP_WARN: f64 = 1e3;

struct GapLog {
    gaps: Vec<RankGap>,
    warnings: Vec<String>,
}

impl GapLog {
    fn new() -> Self {
        GapLog {
            gaps: Vec::new(),
            warnings: Vec::new(),
        }
    }

    fn record(&mut self, context: &str, d: &RankDecision) {
        self.gaps.push(RankGap {
            context: context.to_string(),
            gap: d.spectral_gap,
        });
        if d.spectral_gap < GAP_WARN {
            self.warnings.push(format!(
                "rank decision '{}' has spectral gap {:.2e} (below {:.0e}); integer output may be unreliable",
                context, d.spectral_gap, GAP_WARN
            ));
        }
    }
}

/// Stacked coboundary map m -> (rho(x_j) m - m)_j as a (g d) x d matrix.
pub fn coboundary_matrix(rep: &Representation) -> CMatrix {
    let d = rep.dim;
    let g = rep.generator_count();
    let mut m = CMatrix::zeros(g * d, d);
    for j in 0..g {
        let block = rep.image(j, 1) - CMatrix::identity(d, d);
        m.view_mut((j * d, 0), (d, d)).copy_from(&block);
    }
    m
}

/// Orthonormal basis of the simultaneous fixed space of the given images.
pub fn h0_invariants(images: &[CMatrix], tol: &ToleranceProfile) -> Result<CMatrix> {
    if images.is_empty() {
        return Err(Error::Contract(
            "h0_invariants needs at least one image".into(),
        ));
    }
    let d = images[0].nrows();
    let mut stacked = CMatrix::zeros(images.len() * d, d);
    for (j, m) in images.iter().enumerate() {
        let block = m - CMatrix::identity(d, d);
        stacked.view_mut((j * d, 0), (d, d)).copy_from(&block);
    }
    kernel_basis(&stacked, tol)
}

fn h0_of_rep(rep: &Representation, tol: &ToleranceProfile) -> Result<(usize, RankDecision)> {
    let stacked = {
        let d = rep.dim;
        let g = rep.generator_count();
        let mut m = CMatrix::zeros(g * d, d);
        for j in 0..g {
            let block = rep.image(j, 1) - CMatrix::identity(d, d);
            m.view_mut((j * d, 0), (d, d)).copy_from(&block);
        }
        m
    };
    let dec = rank_decision(&stacked, tol)?;
    Ok((rep.dim - dec.rank, dec))
}

/// Basis of Z^1 as cocycles (kernel of the Fox matrix).
pub fn z1_basis(
    pres: &GroupPresentation,
    rep: &Representation,
    tol: &ToleranceProfile,
) -> Result<Vec<Cocycle>> {
    let d = rep.dim;
    let g = pres.generator_count;
    if pres.relators.is_empty() {
        // free group: every assignment of values is a cocycle
        let mut out = Vec::with_capacity(g * d);
        for k in 0..g * d {
            let mut col = CVector::zeros(g * d);
            col[k] = C64::new(1.0, 0.0);
            out.push(Cocycle::from_stacked(col.as_view(), g, d));
        }
        return Ok(out);
    }
    let fox = fox_matrix(pres, rep, tol)?;
    let ker = kernel_basis(&fox, tol)?;
    Ok((0..ker.ncols())
        .map(|k| Cocycle::from_stacked(ker.column(k), g, d))
        .collect())
}

/// dim B^1 = dim V - dim H^0.
pub fn b1_dimension(
    pres: &GroupPresentation,
    rep: &Representation,
    tol: &ToleranceProfile,
) -> Result<usize> {
    let report = validate_representation(pres, rep, tol)?;
    if !report.pass {
        return Err(Error::RelatorCheckFailed {
            context: "b1_dimension".into(),
            deviation: report.max_deviation(),
        });
    }
    let (h0, _) = h0_of_rep(rep, tol)?;
    Ok(rep.dim - h0)
}

/// Rank of the coboundary map computed directly; must agree with
/// [`b1_dimension`] (the self-consistency oracle used in tests).
pub fn coboundary_rank(rep: &Representation, tol: &ToleranceProfile) -> Result<usize> {
    let m = coboundary_matrix(rep);
    Ok(rank_decision(&m, tol)?.rank)
}

/// Values of the cocycle on the given words, by iterating the cocycle
/// relation along each word.
pub fn restrict_cocycle(c: &Cocycle, words: &[Word], rep: &Representation) -> Cocycle {
    let values = words
        .iter()
        .map(|w| cocycle_value(rep, &c.values, w))
        .collect();
    Cocycle { values }
}

fn unit_columns(m: &CMatrix) -> CMatrix {
    let mut out = m.clone();
    for j in 0..out.ncols() {
        let norm = out.column(j).norm();
        if norm > 0.0 {
            for i in 0..out.nrows() {
                out[(i, j)] /= C64::new(norm, 0.0);
            }
        }
    }
    out
}

/// dim of the image of span(cols) in the quotient by col-space of `modulo`:
/// rank([cols | modulo]) - rank(modulo), with unit-normalized columns.
fn quotient_image_rank(
    cols: &CMatrix,
    modulo: &CMatrix,
    tol: &ToleranceProfile,
    log: &mut GapLog,
    context: &str,
) -> Result<usize> {
    let rank_mod = if modulo.ncols() == 0 {
        0
    } else {
        let d = rank_decision(&unit_columns(modulo), tol)?;
        log.record(&format!("{} (coboundaries)", context), &d);
        d.rank
    };
    if cols.ncols() == 0 {
        return Ok(0);
    }
    let mut combined = CMatrix::zeros(cols.nrows(), cols.ncols() + modulo.ncols());
    combined
        .view_mut((0, 0), (cols.nrows(), cols.ncols()))
        .copy_from(cols);
    if modulo.ncols() > 0 {
        combined
            .view_mut((0, cols.ncols()), (modulo.nrows(), modulo.ncols()))
            .copy_from(modulo);
    }
    let d = rank_decision(&unit_columns(&combined), tol)?;
    log.record(context, &d);
    Ok(d.rank - rank_mod)
}

struct GroupCohomology {
    dim_h0: usize,
    dim_z1: usize,
    dim_b1: usize,
    dim_h1: usize,
    z1: Vec<Cocycle>,
}

fn group_cohomology(
    pres: &GroupPresentation,
    rep: &Representation,
    tol: &ToleranceProfile,
    log: &mut GapLog,
    label: &str,
) -> Result<GroupCohomology> {
    let d = rep.dim;
    let g = pres.generator_count;
    let (dim_h0, h0_dec) = h0_of_rep(rep, tol)?;
    log.record(&format!("{} H0", label), &h0_dec);
    let z1 = if pres.relators.is_empty() {
        z1_basis(pres, rep, tol)?
    } else {
        let fox = fox_matrix(pres, rep, tol)?;
        let dec = rank_decision(&fox, tol)?;
        log.record(&format!("{} Z1", label), &dec);
        let ker = kernel_basis(&fox, tol)?;
        (0..ker.ncols())
            .map(|k| Cocycle::from_stacked(ker.column(k), g, d))
            .collect()
    };
    let dim_z1 = z1.len();
    let dim_b1 = d - dim_h0;
    if dim_z1 < dim_b1 {
        return Err(Error::Contract(format!(
            "{}: dim Z1 = {} < dim B1 = {}; rank thresholds are inconsistent (see spectral gaps)",
            label, dim_z1, dim_b1
        )));
    }
    Ok(GroupCohomology {
        dim_h0,
        dim_z1,
        dim_b1,
        dim_h1: dim_z1 - dim_b1,
        z1,
    })
}

/// Full cohomology report for a presented group with peripheral structure.
pub fn h1_report(
    pres: &GroupPresentation,
    rep: &Representation,
    tol: &ToleranceProfile,
) -> Result<CohomologyReport> {
    let validation = validate_representation(pres, rep, tol)?;
    if !validation.pass {
        return Err(Error::RelatorCheckFailed {
            context: format!("h1_report for '{}'", pres.name),
            deviation: validation.max_deviation(),
        });
    }
    let mut log = GapLog::new();
    let main = group_cohomology(pres, rep, tol, &mut log, "M")?;

    let mut peripherals = Vec::new();
    let mut total_restrictions: Vec<CMatrix> = Vec::new();
    let mut total_coboundaries: Vec<CMatrix> = Vec::new();
    for (pi, p) in pres.peripherals.iter().enumerate() {
        let label = format!("peripheral #{}", pi);
        let sub_pres = p.subgroup_presentation();
        let sub_rep =
            restrict_representation(rep, &p.words, &format!("{} restricted", rep.source))?;
        let sub = group_cohomology(&sub_pres, &sub_rep, tol, &mut log, &label)?;

        // restriction of each Z^1(M) basis cocycle to the peripheral words
        let k = p.words.len();
        let d = rep.dim;
        let mut restricted = CMatrix::zeros(k * d, main.z1.len());
        for (ci, c) in main.z1.iter().enumerate() {
            let rc = restrict_cocycle(c, &p.words, rep);
            let col = rc.stacked();
            for i in 0..k * d {
                restricted[(i, ci)] = col[i];
            }
        }
        let cob = coboundary_matrix(&sub_rep);
        let restriction_rank = quotient_image_rank(
            &restricted,
            &cob,
            tol,
            &mut log,
            &format!("{} restriction", label),
        )?;
        peripherals.push(PeripheralCohomology {
            index: pi,
            kind: match p.kind {
                PeripheralKind::Torus => "torus".to_string(),
                PeripheralKind::Genus(g) => format!("genus-{}", g),
            },
            dim_h0: sub.dim_h0,
            dim_z1: sub.dim_z1,
            dim_b1: sub.dim_b1,
            dim_h1: sub.dim_h1,
            restriction_rank,
        });
        total_restrictions.push(restricted);
        total_coboundaries.push(cob);
    }

    // total restriction map into the direct sum of peripheral H^1
    let total_restriction_rank = if pres.peripherals.is_empty() {
        0
    } else {
        let rows: usize = total_restrictions.iter().map(|m| m.nrows()).sum();
        let mut stacked = CMatrix::zeros(rows, main.z1.len());
        let mut offset = 0;
        for m in &total_restrictions {
            stacked
                .view_mut((offset, 0), (m.nrows(), m.ncols()))
                .copy_from(m);
            offset += m.nrows();
        }
        let cob_cols: usize = total_coboundaries.iter().map(|m| m.ncols()).sum();
        let mut cob = CMatrix::zeros(rows, cob_cols);
        let (mut ro, mut co) = (0, 0);
        for m in &total_coboundaries {
            cob.view_mut((ro, co), (m.nrows(), m.ncols())).copy_from(m);
            ro += m.nrows();
            co += m.ncols();
        }
        quotient_image_rank(&stacked, &cob, tol, &mut log, "total restriction")?
    };
    let restriction_injective = total_restriction_rank == main.dim_h1;

    Ok(CohomologyReport {
        coefficients: rep.source.clone(),
        dim_v: rep.dim,
        dim_h0: main.dim_h0,
        dim_z1: main.dim_z1,
        dim_b1: main.dim_b1,
        dim_h1: main.dim_h1,
        peripherals,
        total_restriction_rank,
        restriction_injective,
        gaps: log.gaps,
        warnings: log.warnings,
        tolerances: *tol,
    })
}

/// Rank of H^1(M) -> direct sum of peripheral H^1 and whether it is injective.
pub fn injectivity_check(
    pres: &GroupPresentation,
    rep: &Representation,
    tol: &ToleranceProfile,
) -> Result<(usize, bool)> {
    let report = h1_report(pres, rep, tol)?;
    Ok((report.total_restriction_rank, report.restriction_injective))
}
