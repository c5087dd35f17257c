//! Words, finite presentations, peripheral structure and Fox derivatives.
//!
//! Words use the letter convention `a..z` for generators and `A..Z` for their
//! inverses; internally a word is a freely reduced sequence of signed
//! generator indices.

use crate::error::{Error, Result};
use crate::gf2::{gf2_affine_solutions, Gf2Matrix};
use crate::linalg::{deviation_from_identity, CMatrix, ToleranceProfile, C64};
use std::fmt;

/// Freely reduced word; the empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<(usize, i8)>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Push one letter, cancelling against the current tail.
    pub fn push(&mut self, gen: usize, sign: i8) {
        debug_assert!(sign == 1 || sign == -1);
        if let Some(&(g, s)) = self.letters.last() {
            if g == gen && s == -sign {
                self.letters.pop();
                return;
            }
        }
        self.letters.push((gen, sign));
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &(g, s) in &other.letters {
            w.push(g, s);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        let mut w = Word::identity();
        for &(g, s) in self.letters.iter().rev() {
            w.push(g, -s);
        }
        w
    }

    /// Remove matching prefix/suffix inverse pairs. Fox kernels are invariant
    /// under this and it shrinks the relator matrices.
    pub fn cyclically_reduced(&self) -> Word {
        let mut v = self.letters.clone();
        while v.len() >= 2 {
            let (g0, s0) = v[0];
            let (g1, s1) = v[v.len() - 1];
            if g0 == g1 && s0 == -s1 {
                v.pop();
                v.remove(0);
            } else {
                break;
            }
        }
        Word { letters: v }
    }

    pub fn exponent_sums(&self, generator_count: usize) -> Vec<i64> {
        let mut sums = vec![0i64; generator_count];
        for &(g, s) in &self.letters {
            sums[g] += s as i64;
        }
        sums
    }

    pub fn mod2_vector(&self, generator_count: usize) -> Vec<u8> {
        self.exponent_sums(generator_count)
            .iter()
            .map(|&e| (e.rem_euclid(2)) as u8)
            .collect()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|&(g, _)| g).max()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(g, s) in &self.letters {
            let ch = (b'a' + g as u8) as char;
            if s == 1 {
                write!(f, "{}", ch)?;
            } else {
                write!(f, "{}", ch.to_ascii_uppercase())?;
            }
        }
        Ok(())
    }
}

/// Parse `a..z` / `A..Z` text into a freely reduced word.
pub fn parse_word(text: &str, generator_count: usize) -> Result<Word> {
    let mut w = Word::identity();
    for ch in text.chars() {
        let (gen, sign) = match ch {
            'a'..='z' => ((ch as u8 - b'a') as usize, 1i8),
            'A'..='Z' => ((ch as u8 - b'A') as usize, -1i8),
            c if c.is_whitespace() => continue,
            other => {
                return Err(Error::WordParse(format!(
                    "invalid character '{}' (expected a-z or A-Z)",
                    other
                )))
            }
        };
        if gen >= generator_count {
            return Err(Error::GeneratorOutOfRange {
                index: gen,
                count: generator_count,
            });
        }
        w.push(gen, sign);
    }
    Ok(w)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PeripheralKind {
    Torus,
    Genus(usize),
}

impl PeripheralKind {
    pub fn expected_word_count(&self) -> usize {
        match self {
            PeripheralKind::Torus => 2,
            PeripheralKind::Genus(g) => 2 * g,
        }
    }
}

/// One boundary component: a torus (meridian, longitude) or a genus-g end
/// with 2g generator words.
#[derive(Debug, Clone)]
pub struct PeripheralSystem {
    pub kind: PeripheralKind,
    pub words: Vec<Word>,
    pub null_homologous: Vec<bool>,
}

impl PeripheralSystem {
    pub fn new(kind: PeripheralKind, words: Vec<Word>, null_homologous: Vec<bool>) -> Result<Self> {
        if let PeripheralKind::Genus(g) = kind {
            if g < 2 {
                return Err(Error::Contract(format!("genus must be >= 2, got {}", g)));
            }
        }
        if words.len() != kind.expected_word_count() {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "peripheral of kind {:?} needs {} words, got {}",
                    kind,
                    kind.expected_word_count(),
                    words.len()
                ),
            });
        }
        if null_homologous.len() != words.len() {
            return Err(Error::DimensionMismatch {
                context: "null_homologous flags must match word count".into(),
            });
        }
        Ok(PeripheralSystem {
            kind,
            words,
            null_homologous,
        })
    }

    /// Standard presentation of the peripheral subgroup in its own generators.
    pub fn subgroup_presentation(&self) -> GroupPresentation {
        match self.kind {
            PeripheralKind::Torus => GroupPresentation::torus(),
            PeripheralKind::Genus(g) => GroupPresentation::surface(g),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroupPresentation {
    pub name: String,
    pub generator_count: usize,
    pub relators: Vec<Word>,
    pub peripherals: Vec<PeripheralSystem>,
}

impl GroupPresentation {
    pub fn new(
        name: &str,
        generator_count: usize,
        relators: Vec<Word>,
        peripherals: Vec<PeripheralSystem>,
    ) -> Result<Self> {
        if generator_count == 0 {
            return Err(Error::Contract(
                "presentation needs at least one generator".into(),
            ));
        }
        let check = |w: &Word| -> Result<()> {
            if let Some(g) = w.max_generator() {
                if g >= generator_count {
                    return Err(Error::GeneratorOutOfRange {
                        index: g,
                        count: generator_count,
                    });
                }
            }
            Ok(())
        };
        for r in &relators {
            check(r)?;
        }
        for p in &peripherals {
            for w in &p.words {
                check(w)?;
            }
        }
        let relators = relators.iter().map(|r| r.cyclically_reduced()).collect();
        Ok(GroupPresentation {
            name: name.to_string(),
            generator_count,
            relators,
            peripherals,
        })
    }

    /// `<a, b | [a, b]>`
    pub fn torus() -> GroupPresentation {
        let r = parse_word("abAB", 2).unwrap();
        GroupPresentation::new("torus", 2, vec![r], vec![]).unwrap()
    }

    /// Standard one-relator closed surface presentation of genus g.
    pub fn surface(g: usize) -> GroupPresentation {
        let n = 2 * g;
        let mut r = Word::identity();
        for i in 0..g {
            let a = 2 * i;
            let b = 2 * i + 1;
            // [a_i, b_i]
            r.push(a, 1);
            r.push(b, 1);
            r.push(a, -1);
            r.push(b, -1);
        }
        GroupPresentation::new(&format!("surface-genus-{}", g), n, vec![r], vec![]).unwrap()
    }

    /// Mod-2 exponent matrix: one row per relator, one column per generator.
    pub fn relator_exponents_mod2(&self) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(self.relators.len(), self.generator_count);
        for (i, r) in self.relators.iter().enumerate() {
            for (j, v) in r.mod2_vector(self.generator_count).iter().enumerate() {
                m.set(i, j, *v);
            }
        }
        m
    }

    /// Whether `w` is zero in H_1(M; Z/2): its mod-2 exponent vector must lie
    /// in the column space of the relator exponents.
    pub fn is_null_homologous_mod2(&self, w: &Word) -> Result<bool> {
        let target = w.mod2_vector(self.generator_count);
        if self.relators.is_empty() {
            return Ok(target.iter().all(|&v| v == 0));
        }
        // solve sum_i x_i * relator_i = target, i.e. transpose system
        let rel = self.relator_exponents_mod2();
        let mut t = Gf2Matrix::zeros(self.generator_count, self.relators.len());
        for i in 0..rel.rows {
            for j in 0..rel.cols {
                t.set(j, i, rel.get(i, j));
            }
        }
        Ok(!gf2_affine_solutions(&t, &target)?.is_empty())
    }

    /// Recompute every peripheral null-homology flag and compare with the
    /// stored ones. The flags are data we refuse to trust.
    pub fn check_null_homology_flags(&self) -> Result<()> {
        for p in &self.peripherals {
            for (w, &stored) in p.words.iter().zip(&p.null_homologous) {
                let computed = self.is_null_homologous_mod2(w)?;
                if computed != stored {
                    return Err(Error::NullHomologyMismatch {
                        word: w.to_string(),
                        stored,
                        computed,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Assignment generator -> invertible matrix, with cached inverses.
#[derive(Debug, Clone)]
pub struct Representation {
    pub dim: usize,
    pub images: Vec<CMatrix>,
    images_inv: Vec<CMatrix>,
    pub source: String,
}

impl Representation {
    pub fn new(images: Vec<CMatrix>, source: &str) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::Contract(
                "representation needs at least one image".into(),
            ));
        }
        let dim = images[0].nrows();
        if dim == 0 {
            return Err(Error::Contract(
                "0-dimensional representation rejected".into(),
            ));
        }
        let mut images_inv = Vec::with_capacity(images.len());
        for (i, m) in images.iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::SingularImage { index: i });
            }
            match m.clone().try_inverse() {
                Some(inv) => images_inv.push(inv),
                None => return Err(Error::SingularImage { index: i }),
            }
        }
        Ok(Representation {
            dim,
            images,
            images_inv,
            source: source.to_string(),
        })
    }

    pub fn generator_count(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, gen: usize, sign: i8) -> &CMatrix {
        if sign == 1 {
            &self.images[gen]
        } else {
            &self.images_inv[gen]
        }
    }

    /// Conjugated representation g . rho . g^-1.
    pub fn conjugate(&self, g: &CMatrix) -> Result<Representation> {
        let gi = g
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Contract("conjugating matrix is singular".into()))?;
        let images = self.images.iter().map(|m| g * m * &gi).collect();
        Representation::new(images, &format!("{} (conjugated)", self.source))
    }
}

/// Ordered product of generator images along a word.
pub fn evaluate_word(rep: &Representation, w: &Word) -> CMatrix {
    let mut m = CMatrix::identity(rep.dim, rep.dim);
    for &(g, s) in w.letters() {
        m *= rep.image(g, s);
    }
    m
}

/// Like [`evaluate_word`], also returning a first-order bound on the
/// floating-point error of the product (max-entry norm): roundoff injected
/// when forming the i-th partial product is amplified by the magnitude of the
/// remaining suffix product, so the bound is
/// u d^2 sum_i |prefix_{i-1}| |A_i| |suffix_{i+1}|.
pub fn evaluate_word_with_error(rep: &Representation, w: &Word) -> (CMatrix, f64) {
    let d = rep.dim as f64;
    let u = f64::EPSILON;
    let max_entry = |m: &CMatrix| m.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let letters = w.letters();
    let len = letters.len();
    // suffix product magnitudes: s[i] = |A_i ... A_L|, s[len] = 1
    let mut suffix_norms = vec![1.0f64; len + 1];
    let mut s = CMatrix::identity(rep.dim, rep.dim);
    for i in (0..len).rev() {
        let (g, sign) = letters[i];
        s = rep.image(g, sign) * s;
        suffix_norms[i] = max_entry(&s).max(1.0);
    }
    let mut p = CMatrix::identity(rep.dim, rep.dim);
    let mut pnorm = 1.0f64;
    let mut err = 0.0f64;
    for (i, &(g, sign)) in letters.iter().enumerate() {
        let a = rep.image(g, sign);
        let anorm = max_entry(a).max(u);
        err += u * d * d * pnorm * anorm * suffix_norms[i + 1];
        p *= a;
        pnorm = max_entry(&p).max(1.0);
    }
    (p, err)
}

/// Restriction of `rep` to the subgroup generated by `words`.
pub fn restrict_representation(
    rep: &Representation,
    words: &[Word],
    source: &str,
) -> Result<Representation> {
    let images = words.iter().map(|w| evaluate_word(rep, w)).collect();
    Representation::new(images, source)
}

/// Per-relator and per-peripheral deviations of a representation.
///
/// Each deviation is compared against
/// `relator_tol * input_scale + 100 * roundoff`, where `input_scale` is the
/// largest entry magnitude over the generator images (floored at 1) and
/// `roundoff` is the running error bound of that check's word evaluation.
/// For holonomy data with O(1) entries this is the plain absolute check; for
/// derived representations with large entries (high symmetric powers,
/// adjoints) the roundoff term keeps the check meaningful instead of
/// tripping on accumulated floating-point noise. A genuinely wrong relator
/// produces deviations at the scale of the image entries, far above either
/// term.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    /// Max-entry deviation of each relator image from the identity.
    pub relator_deviations: Vec<f64>,
    pub relator_bounds: Vec<f64>,
    /// For each torus peripheral, deviation of the commutator of its two
    /// words from the identity; for genus systems, deviation of the surface
    /// relator image.
    pub peripheral_deviations: Vec<f64>,
    pub peripheral_bounds: Vec<f64>,
    pub pass: bool,
    pub tolerance: f64,
}

impl ValidationReport {
    pub fn max_deviation(&self) -> f64 {
        self.relator_deviations
            .iter()
            .chain(self.peripheral_deviations.iter())
            .fold(0.0f64, |a, &b| a.max(b))
    }
}

/// Check relators map to the identity and peripheral systems are coherent.
pub fn validate_representation(
    pres: &GroupPresentation,
    rep: &Representation,
    tol: &ToleranceProfile,
) -> Result<ValidationReport> {
    if rep.generator_count() != pres.generator_count {
        return Err(Error::DimensionMismatch {
            context: format!(
                "representation has {} images, presentation has {} generators",
                rep.generator_count(),
                pres.generator_count
            ),
        });
    }
    let input_scale = rep
        .images
        .iter()
        .flat_map(|m| m.iter())
        .map(|z| z.norm())
        .fold(1.0f64, f64::max);
    let bound_for = |roundoff: f64| tol.relator_tol * input_scale + 100.0 * roundoff;
    let mut relator_deviations = Vec::with_capacity(pres.relators.len());
    let mut relator_bounds = Vec::with_capacity(pres.relators.len());
    for r in &pres.relators {
        let (m, roundoff) = evaluate_word_with_error(rep, r);
        relator_deviations.push(deviation_from_identity(&m));
        relator_bounds.push(bound_for(roundoff));
    }
    let mut peripheral_deviations = Vec::new();
    let mut peripheral_bounds = Vec::new();
    for p in &pres.peripherals {
        let (dev, roundoff) = match p.kind {
            PeripheralKind::Torus => {
                let com = p.words[0]
                    .concat(&p.words[1])
                    .concat(&p.words[0].inverse())
                    .concat(&p.words[1].inverse());
                let (m, roundoff) = evaluate_word_with_error(rep, &com);
                (deviation_from_identity(&m), roundoff)
            }
            PeripheralKind::Genus(g) => {
                let sub = GroupPresentation::surface(g);
                let restricted = restrict_representation(rep, &p.words, "peripheral restriction")?;
                let (m, roundoff) = evaluate_word_with_error(&restricted, &sub.relators[0]);
                (deviation_from_identity(&m), roundoff)
            }
        };
        peripheral_deviations.push(dev);
        peripheral_bounds.push(bound_for(roundoff));
    }
    let pass = relator_deviations
        .iter()
        .zip(&relator_bounds)
        .chain(peripheral_deviations.iter().zip(&peripheral_bounds))
        .all(|(&d, &b)| d <= b);
    Ok(ValidationReport {
        relator_deviations,
        relator_bounds,
        peripheral_deviations,
        peripheral_bounds,
        pass,
        tolerance: tol.relator_tol,
    })
}

/// Fox derivative of a single word with respect to every generator,
/// evaluated in `rep`. Returns one dim x dim block per generator.
pub fn fox_blocks(rep: &Representation, w: &Word) -> Vec<CMatrix> {
    let d = rep.dim;
    let mut blocks = vec![CMatrix::zeros(d, d); rep.generator_count()];
    let mut prefix = CMatrix::identity(d, d);
    for &(g, s) in w.letters() {
        if s == 1 {
            blocks[g] += &prefix;
            prefix *= rep.image(g, 1);
        } else {
            prefix *= rep.image(g, -1);
            blocks[g] -= &prefix;
        }
    }
    blocks
}

/// Block matrix of all Fox derivatives: one block-row per relator, one
/// block-column per generator. Its kernel is the cocycle space Z^1.
///
/// Errors if `rep` does not satisfy the relators within `relator_tol`.
pub fn fox_matrix(
    pres: &GroupPresentation,
    rep: &Representation,
    tol: &ToleranceProfile,
) -> Result<CMatrix> {
    let report = validate_representation(pres, rep, tol)?;
    if let Some(idx) = (0..report.relator_deviations.len())
        .find(|&i| report.relator_deviations[i] > report.relator_bounds[i])
    {
        return Err(Error::RelatorCheckFailed {
            context: format!("relator #{} '{}'", idx, pres.relators[idx]),
            deviation: report.relator_deviations[idx],
        });
    }
    let d = rep.dim;
    let g = pres.generator_count;
    let rows = pres.relators.len() * d;
    let mut m = CMatrix::zeros(rows.max(0), g * d);
    for (ri, r) in pres.relators.iter().enumerate() {
        let blocks = fox_blocks(rep, r);
        for (gi, b) in blocks.iter().enumerate() {
            m.view_mut((ri * d, gi * d), (d, d)).copy_from(b);
        }
    }
    Ok(m)
}

/// d(w) for the cocycle with values `values` on the generators, computed by
/// iterating d(xy) = d(x) + rho(x) d(y) along the word.
pub fn cocycle_value(
    rep: &Representation,
    values: &[crate::linalg::CVector],
    w: &Word,
) -> crate::linalg::CVector {
    let d = rep.dim;
    let mut acc = crate::linalg::CVector::zeros(d);
    let mut prefix = CMatrix::identity(d, d);
    for &(g, s) in w.letters() {
        if s == 1 {
            acc += &prefix * &values[g];
            prefix *= rep.image(g, 1);
        } else {
            prefix *= rep.image(g, -1);
            acc -= &prefix * &values[g];
        }
    }
    acc
}

pub fn trivial_representation(generator_count: usize, dim: usize) -> Representation {
    let images = (0..generator_count)
        .map(|_| CMatrix::identity(dim, dim))
        .collect();
    Representation::new(images, "trivial").unwrap()
}

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}
