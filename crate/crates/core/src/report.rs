//! Machine-readable and human-readable verification reports.

use crate::error::Result;
use crate::linalg::ToleranceProfile;
use crate::verify::VerificationRecord;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool: String,
    pub version: String,
    pub entry: String,
    pub tolerances: ToleranceProfile,
    pub records: Vec<VerificationRecord>,
    pub warnings: Vec<String>,
}

impl ReportDocument {
    pub fn new(
        entry: &str,
        tolerances: ToleranceProfile,
        records: Vec<VerificationRecord>,
        warnings: Vec<String>,
    ) -> Self {
        ReportDocument {
            tool: "holocoh".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            entry: entry.to_string(),
            tolerances,
            records,
            warnings,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self)
            .map_err(|e| crate::error::Error::Contract(format!("json serialization: {}", e)))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| crate::error::Error::Contract(format!("json parse: {}", e)))
    }

    /// Fixed-width table; integer checks print as integers, float checks with
    /// their tolerance so the two kinds stay visually distinct.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "entry: {}   (rank tol {:.0e}, relator tol {:.0e})\n",
            self.entry, self.tolerances.rank_rel_tol, self.tolerances.relator_tol
        ));
        out.push_str(&format!(
            "{:<5} {:<6} {:<4} {:<20} {:<10} {:>12} {:>12}  {:<6} {}\n",
            "lift", "char", "n", "check", "coeffs", "predicted", "computed", "status", "context"
        ));
        for r in &self.records {
            let n = r.n.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
            let (pred, comp) = if r.tolerance == 0.0 {
                (
                    format!("{}", r.predicted as i64),
                    format!("{}", r.computed as i64),
                )
            } else {
                (
                    format!("{:.6}", r.predicted),
                    format!("{:.6} ±{:.0e}", r.computed, r.tolerance),
                )
            };
            out.push_str(&format!(
                "{:<5} {:<6} {:<4} {:<20} {:<10} {:>12} {:>12}  {:<6} {}\n",
                r.lift,
                r.character,
                n,
                r.check.to_string(),
                r.coefficients,
                pred,
                comp,
                if r.pass { "pass" } else { "FAIL" },
                r.context
            ));
        }
        let (passed, total) = (
            self.records.iter().filter(|r| r.pass).count(),
            self.records.len(),
        );
        out.push_str(&format!("{}/{} records pass\n", passed, total));
        for w in &self.warnings {
            out.push_str(&format!("warning: {}\n", w));
        }
        out
    }
}
