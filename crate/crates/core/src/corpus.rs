//! The presentation file format and the bundled example data.
//!
//! A presentation file is a TOML document carrying a group presentation,
//! optional peripheral systems and one 2x2 holonomy matrix per generator
//! (entries as [re, im] pairs). Loading validates everything: relator images
//! must be the identity within `relator_tol` and the stored null-homology
//! flags must match what the relator exponents say mod 2.

use crate::error::{Error, Result};
use crate::group::{
    parse_word, validate_representation, GroupPresentation, PeripheralKind, PeripheralSystem,
    Representation, ValidationReport,
};
use crate::linalg::{CMatrix, ToleranceProfile, C64};
use crate::verify::EntryKind;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresentationFile {
    pub name: String,
    #[serde(default = "default_kind")]
    pub kind: EntryKind,
    pub generators: usize,
    #[serde(default)]
    pub relators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(default, rename = "peripheral")]
    pub peripherals: Vec<PeripheralSpec>,
    #[serde(rename = "holonomy")]
    pub holonomy: Vec<HolonomySpec>,
}

fn default_kind() -> EntryKind {
    EntryKind::Manifold
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeripheralSpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<usize>,
    pub words: Vec<String>,
    pub null_homologous: Vec<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meridian: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub longitude: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolonomySpec {
    pub generator: String,
    /// 2x2 matrix, row-major, each entry an [re, im] pair.
    pub matrix: Vec<Vec<[f64; 2]>>,
}

/// A loaded and validated corpus entry.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub file: PresentationFile,
    pub presentation: GroupPresentation,
    pub base: Representation,
    pub kind: EntryKind,
    pub validation: ValidationReport,
}

fn corpus_err(origin: &str, message: impl Into<String>) -> Error {
    Error::CorpusParse {
        origin: origin.to_string(),
        message: message.into(),
    }
}

/// Turn a parsed file into a validated presentation + base representation.
pub fn parse_presentation_file(pf: &PresentationFile, origin: &str) -> Result<CorpusEntry> {
    if pf.generators == 0 {
        return Err(corpus_err(origin, "generators must be >= 1"));
    }
    if pf.generators > 26 {
        return Err(corpus_err(origin, "at most 26 generators (letters a-z)"));
    }
    let relators = pf
        .relators
        .iter()
        .map(|r| parse_word(r, pf.generators))
        .collect::<Result<Vec<_>>>()?;
    let mut peripherals = Vec::new();
    for (i, p) in pf.peripherals.iter().enumerate() {
        let kind = match p.kind.as_str() {
            "torus" => PeripheralKind::Torus,
            "genus" => {
                let g = p.genus.ok_or_else(|| {
                    corpus_err(
                        origin,
                        format!("peripheral #{} of kind 'genus' needs a genus field", i),
                    )
                })?;
                PeripheralKind::Genus(g)
            }
            other => {
                return Err(corpus_err(
                    origin,
                    format!("peripheral #{} has unknown kind '{}'", i, other),
                ))
            }
        };
        let words = p
            .words
            .iter()
            .map(|w| parse_word(w, pf.generators))
            .collect::<Result<Vec<_>>>()?;
        if kind == PeripheralKind::Torus {
            if let Some(m) = &p.meridian {
                if parse_word(m, pf.generators)? != words[0] {
                    return Err(corpus_err(
                        origin,
                        format!(
                            "peripheral #{}: meridian label does not match the first word",
                            i
                        ),
                    ));
                }
            }
            if let Some(l) = &p.longitude {
                if parse_word(l, pf.generators)? != words[1] {
                    return Err(corpus_err(
                        origin,
                        format!(
                            "peripheral #{}: longitude label does not match the second word",
                            i
                        ),
                    ));
                }
            }
        }
        peripherals.push(PeripheralSystem::new(
            kind,
            words,
            p.null_homologous.clone(),
        )?);
    }
    let presentation = GroupPresentation::new(&pf.name, pf.generators, relators, peripherals)?;

    // holonomy: exactly one 2x2 matrix per generator, in any order
    let mut images: Vec<Option<CMatrix>> = vec![None; pf.generators];
    for h in &pf.holonomy {
        let w = parse_word(&h.generator, pf.generators)?;
        let letters = w.letters();
        if letters.len() != 1 || letters[0].1 != 1 {
            return Err(corpus_err(
                origin,
                format!("holonomy entry '{}' is not a single generator", h.generator),
            ));
        }
        let gi = letters[0].0;
        if images[gi].is_some() {
            return Err(corpus_err(
                origin,
                format!("duplicate holonomy entry for generator '{}'", h.generator),
            ));
        }
        if h.matrix.len() != 2 || h.matrix.iter().any(|row| row.len() != 2) {
            return Err(corpus_err(
                origin,
                format!("holonomy for '{}' must be a 2x2 matrix", h.generator),
            ));
        }
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(h.matrix[0][0][0], h.matrix[0][0][1]),
                C64::new(h.matrix[0][1][0], h.matrix[0][1][1]),
                C64::new(h.matrix[1][0][0], h.matrix[1][0][1]),
                C64::new(h.matrix[1][1][0], h.matrix[1][1][1]),
            ],
        );
        images[gi] = Some(m);
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            m.ok_or_else(|| {
                corpus_err(
                    origin,
                    format!(
                        "missing holonomy for generator '{}'",
                        (b'a' + i as u8) as char
                    ),
                )
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let base = Representation::new(images, &format!("{} holonomy lift", pf.name))?;

    let tol = ToleranceProfile::default();
    let validation = validate_representation(&presentation, &base, &tol)?;
    if !validation.pass {
        let worst = validation.max_deviation();
        let failing = presentation
            .relators
            .iter()
            .zip(&validation.relator_deviations)
            .find(|(_, &d)| d > tol.relator_tol)
            .map(|(r, _)| r.to_string())
            .unwrap_or_else(|| "peripheral system".to_string());
        return Err(Error::RelatorCheckFailed {
            context: format!("{}: '{}'", origin, failing),
            deviation: worst,
        });
    }
    presentation.check_null_homology_flags()?;
    Ok(CorpusEntry {
        file: pf.clone(),
        presentation,
        base,
        kind: pf.kind,
        validation,
    })
}

pub fn load_str(text: &str, origin: &str) -> Result<CorpusEntry> {
    let pf: PresentationFile =
        toml::from_str(text).map_err(|e| corpus_err(origin, e.to_string()))?;
    parse_presentation_file(&pf, origin)
}

pub fn load_file(path: &Path) -> Result<CorpusEntry> {
    let text = std::fs::read_to_string(path)?;
    load_str(&text, &path.display().to_string())
}

pub fn save(pf: &PresentationFile) -> Result<String> {
    toml::to_string_pretty(pf)
        .map_err(|e| corpus_err(&pf.name, format!("serialization failed: {}", e)))
}

const FIG8: &str = include_str!("../corpus/fig8.toml");
const TORUS: &str = include_str!("../corpus/torus.toml");
const FREE2: &str = include_str!("../corpus/free2.toml");
const GENUS2: &str = include_str!("../corpus/genus2.toml");

pub fn bundled_names() -> &'static [&'static str] {
    &["fig8", "torus", "free2", "genus2"]
}

pub fn bundled(name: &str) -> Option<&'static str> {
    match name {
        "fig8" => Some(FIG8),
        "torus" => Some(TORUS),
        "free2" => Some(FREE2),
        "genus2" => Some(GENUS2),
        _ => None,
    }
}

/// Resolve a CLI input: a bundled corpus name first, then a file path.
pub fn resolve(input: &str) -> Result<CorpusEntry> {
    if let Some(text) = bundled(input) {
        return load_str(text, &format!("bundled:{}", input));
    }
    let path = Path::new(input);
    if path.exists() {
        return load_file(path);
    }
    Err(Error::CorpusNotFound(input.to_string()))
}
