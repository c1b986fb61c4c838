//! Machine-readable and plain-text reports.
//!
//! Every JSON report is an object with `schema`, `version` and `command`
//! fields followed by the command's own fields. Rationals are written as
//! `"p/q"` strings and maps are ordered, so equal inputs give equal bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::algebra::{StratifiedAlgebra, ValidationReport};
use crate::derivations::DerivationSpace;
use crate::exactlin::{format_rational, Matrix, Rational, Signature};
use crate::metric::InnerProductAssignment;
use crate::prolong::Prolongation;
use crate::structure::ClassificationReport;

pub const SCHEMA: &str = "carnot-report/1";

pub fn ser_rational<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(x))
}

fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.row_vecs()
        .iter()
        .map(|r| r.iter().map(format_rational).collect())
        .collect()
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    version: &'static str,
    command: &'static str,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON with the common header and a trailing newline.
pub fn to_json<T: Serialize>(command: &'static str, body: &T) -> String {
    let env = Envelope {
        schema: SCHEMA,
        version: env!("CARGO_PKG_VERSION"),
        command,
        body,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViolationRecord {
    pub kind: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidateReport {
    pub name: String,
    pub layers: Vec<usize>,
    pub valid: bool,
    pub violations: Vec<ViolationRecord>,
}

impl ValidateReport {
    pub fn new(name: &str, alg: &StratifiedAlgebra, report: &ValidationReport) -> Self {
        ValidateReport {
            name: name.to_string(),
            layers: alg.layer_dims().to_vec(),
            valid: report.is_valid(),
            violations: report
                .violations
                .iter()
                .map(|v| ViolationRecord {
                    kind: v.kind(),
                    message: v.to_string(),
                })
                .collect(),
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let status = if self.valid { "valid" } else { "INVALID" };
        let _ = writeln!(s, "{}: {} (layers {:?})", self.name, status, self.layers);
        for v in &self.violations {
            let _ = writeln!(s, "  {}", v.message);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerGram {
    pub layer: usize,
    pub gram: Vec<Vec<String>>,
    pub signature: Signature,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MetricReport {
    pub name: String,
    pub layers: Vec<usize>,
    pub positive_definite: bool,
    pub grams: Vec<LayerGram>,
}

impl MetricReport {
    pub fn new(name: &str, alg: &StratifiedAlgebra, metric: &InnerProductAssignment) -> Self {
        MetricReport {
            name: name.to_string(),
            layers: alg.layer_dims().to_vec(),
            positive_definite: metric.is_positive_definite(),
            grams: metric
                .grams()
                .iter()
                .enumerate()
                .map(|(j, g)| LayerGram {
                    layer: j + 1,
                    gram: matrix_strings(g.matrix()),
                    signature: g.signature(),
                })
                .collect(),
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}: canonical inner products", self.name);
        for g in &self.grams {
            let sig = &g.signature;
            let _ = writeln!(
                s,
                "layer {} (signature {}, {}, {}):",
                g.layer, sig.plus, sig.minus, sig.zero
            );
            for row in &g.gram {
                let _ = writeln!(s, "  [{}]", row.join(", "));
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationsReport {
    pub name: String,
    pub kind: &'static str,
    pub dim: usize,
    /// Each basis element as one matrix per layer.
    pub basis: Vec<Vec<Vec<Vec<String>>>>,
}

impl DerivationsReport {
    pub fn new(name: &str, space: &DerivationSpace) -> Self {
        DerivationsReport {
            name: name.to_string(),
            kind: space.kind.name(),
            dim: space.dim(),
            basis: space
                .basis
                .iter()
                .map(|d| d.blocks().iter().map(matrix_strings).collect())
                .collect(),
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{}: {} derivations, dimension {}",
            self.name, self.kind, self.dim
        );
        for (k, blocks) in self.basis.iter().enumerate() {
            let _ = writeln!(s, "D{}:", k + 1);
            for (j, b) in blocks.iter().enumerate() {
                let rows: Vec<String> = b.iter().map(|r| format!("[{}]", r.join(", "))).collect();
                let _ = writeln!(s, "  layer {}: {}", j + 1, rows.join(" "));
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProlongReport {
    pub name: String,
    pub g0: &'static str,
    pub max_degree: usize,
    pub truncated: bool,
    pub layer_dims: BTreeMap<i32, usize>,
    pub total_dim: usize,
}

impl ProlongReport {
    pub fn new(name: &str, p: &Prolongation) -> Self {
        ProlongReport {
            name: name.to_string(),
            g0: p.g0().kind.name(),
            max_degree: p.max_degree(),
            truncated: p.is_truncated(),
            layer_dims: p.layer_dims(),
            total_dim: p.total_dim(),
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}: prolongation with g0 = {}", self.name, self.g0);
        let dims: Vec<String> = self.layer_dims.iter().map(|(d, k)| format!("{d}:{k}")).collect();
        let _ = writeln!(s, "layer dims {}", dims.join(" "));
        if self.truncated {
            let _ = writeln!(
                s,
                "TRUNCATED at degree cap {}; dimension so far {}, no result",
                self.max_degree, self.total_dim
            );
        } else {
            let _ = writeln!(s, "total dim {}", self.total_dim);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifyReport {
    pub name: String,
    #[serde(flatten)]
    pub report: ClassificationReport,
}

impl ClassifyReport {
    pub fn text(&self) -> String {
        let r = &self.report;
        let mut s = String::new();
        let _ = writeln!(s, "{}: {}", self.name, r.verdict.as_str());
        let dims: Vec<String> = r.layer_dims.iter().map(|(d, k)| format!("{d}:{k}")).collect();
        let _ = writeln!(s, "layer dims {}", dims.join(" "));
        let _ = writeln!(s, "total dim {} (g {}, g0 {})", r.total_dim, r.base_dim, r.g0_dim);
        let k = &r.killing_signature;
        let _ = writeln!(s, "Killing signature ({}, {}, {})", k.plus, k.minus, k.zero);
        let _ = writeln!(
            s,
            "radical dim {} (H-graded: {})",
            r.radical_dim, r.radical_h_graded
        );
        let _ = writeln!(s, "centroid dim {}", r.centroid_dim);
        if let Some(c) = &r.rank_one_certificate {
            let sig = &c.centralizer_signature;
            let _ = writeln!(
                s,
                "rank-one certificate (signature criterion): {}",
                if c.holds { "holds" } else { "FAILS" }
            );
            let _ = writeln!(
                s,
                "  centralizer of H: dim {}, in degree 0: {}",
                c.centralizer_dim, c.centralizer_in_degree_zero
            );
            let _ = writeln!(s, "  B(H,H) = {}", format_rational(&c.h_norm));
            let _ = writeln!(
                s,
                "  signature on centralizer ({}, {}, {})",
                sig.plus, sig.minus, sig.zero
            );
        }
        for n in &r.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogListing {
    pub entries: Vec<CatalogLine>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogLine {
    pub name: String,
    pub layers: Vec<usize>,
    pub expected: crate::structure::Verdict,
}

impl CatalogListing {
    pub fn text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let _ = writeln!(
                s,
                "{:<26} layers {:<10} expected {}",
                e.name,
                format!("{:?}", e.layers),
                e.expected.as_str()
            );
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrorReport {
    pub error: String,
    pub location: Option<String>,
}
