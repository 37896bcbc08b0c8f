//! Piecewise assembly of the global dimension bound.
//!
//! The real line is tiled by pieces; each piece is bounded by an imported
//! constant, by emptiness, or by the dimension of a Cantor set plus the
//! covering exponent of a branch case. The global bound is the largest piece.

pub mod constants;

use std::fmt::Write as _;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cover::{builtin_case, verify_case, Certificate};
use crate::decimal::{format_decimal, format_exact, parse_decimal, DecimalInterval, Rounding};
use crate::error::{Error, Result};
use crate::interval::bits_for_digits;
use crate::jp::{default_order, estimate_dimension, DimEstimate, GaussSystem};
use crate::surd::approx;
use crate::symbolic::{builtin_spec, gap_cases, gap_constant};

use constants::*;

pub const RIGOROUS: &str = "RIGOROUS";
pub const HEURISTIC: &str = "HEURISTIC";

const JP_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rigorous,
    Heuristic,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Rigorous => "rigorous",
            Mode::Heuristic => "heuristic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DimSource {
    /// Imported constant.
    Hensley,
    /// Periodic-orbit estimate computed here, rounded up.
    JpEstimate,
    /// Published heuristic value, checked against the estimate computed here.
    JpPrinted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CantorDim {
    pub set: String,
    pub value: String,
    pub source: DimSource,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapDim {
    pub case: String,
    pub s: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Bound {
    Imported { value: String, source: String },
    Sum { cantor: CantorDim, gap: GapDim },
    Scaled { factor: u32, cantor: CantorDim, source: String },
    Max { parts: Vec<Bound> },
    Empty { source: String },
}

impl Bound {
    /// Exact value; `None` for an empty piece.
    pub fn value(&self) -> Option<BigRational> {
        let dec = |s: &str| parse_decimal(s).expect("decimal field");
        match self {
            Bound::Imported { value, .. } => Some(dec(value)),
            Bound::Sum { cantor, gap } => Some(dec(&cantor.value) + dec(&gap.s)),
            Bound::Scaled { factor, cantor, .. } => {
                Some(dec(&cantor.value) * BigRational::from_integer((*factor).into()))
            }
            Bound::Max { parts } => parts.iter().filter_map(Bound::value).max(),
            Bound::Empty { .. } => None,
        }
    }

    fn cantor_dims(&self) -> Vec<&CantorDim> {
        match self {
            Bound::Sum { cantor, .. } | Bound::Scaled { cantor, .. } => vec![cantor],
            Bound::Max { parts } => parts.iter().flat_map(Bound::cantor_dims).collect(),
            _ => Vec::new(),
        }
    }

    fn gaps(&self) -> Vec<&GapDim> {
        match self {
            Bound::Sum { gap, .. } => vec![gap],
            Bound::Max { parts } => parts.iter().flat_map(Bound::gaps).collect(),
            _ => Vec::new(),
        }
    }

    pub fn uses_estimates(&self) -> bool {
        self.cantor_dims().iter().any(|c| c.source != DimSource::Hensley)
    }

    pub fn describe(&self) -> String {
        let dim = |c: &CantorDim| {
            let tag = match c.source {
                DimSource::Hensley => "Hensley",
                DimSource::JpEstimate => "JP estimate",
                DimSource::JpPrinted => "JP heuristic",
            };
            format!("{} [{} {}]", c.value, tag, c.set)
        };
        match self {
            Bound::Imported { value, source } => format!("{value} [{source}]"),
            Bound::Sum { cantor, gap } => format!("{} + {} [cover {}]", dim(cantor), gap.s, gap.case),
            Bound::Scaled { factor, cantor, .. } => format!("{factor} * {}", dim(cantor)),
            Bound::Max { parts } => {
                let inner: Vec<String> = parts.iter().map(Bound::describe).collect();
                format!("max({})", inner.join(", "))
            }
            Bound::Empty { source } => format!("empty [{source}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceBound {
    pub lower: String,
    pub upper: String,
    pub lower_closed: bool,
    pub bound: Bound,
    /// Exact value of the bound; absent for an empty piece.
    pub sum_bound: Option<String>,
    /// Value stated for the piece when it differs from the exact one.
    pub stated: Option<String>,
    pub verdict: bool,
    pub notes: Vec<String>,
}

impl PieceBound {
    pub fn interval(&self) -> String {
        let open = if self.lower_closed { '[' } else { '(' };
        format!("{open}{}, {})", self.lower, self.upper)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateRecord {
    Cover {
        case: String,
        s: String,
        margin: String,
        rule_sums: Vec<DecimalInterval>,
        max_sum: DecimalInterval,
        verdict: bool,
        meets_margin: bool,
    },
    Dimension {
        set: String,
        order: usize,
        value: String,
        bracket: DecimalInterval,
        residual: Option<String>,
        label: String,
        stated: Option<String>,
        within_tolerance: Option<bool>,
    },
    /// Gap constant behind a piece's inclusion; informational.
    Gap {
        label: String,
        inner: String,
        outer: String,
        threshold: String,
        value: DecimalInterval,
        holds: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalReport {
    pub mode: Mode,
    pub label: String,
    pub pieces: Vec<PieceBound>,
    /// Largest piece value, exact.
    pub global_bound: String,
    /// Stated value of the largest piece.
    pub stated_global: String,
    /// Every piece verdict passes.
    pub verdict: bool,
    /// Every gap inequality behind the inclusions holds.
    pub premises_hold: bool,
    pub certificates: Vec<CertificateRecord>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub mode: Mode,
    /// Replace the imported Cantor-set dimensions by estimates computed here.
    pub substitute_estimates: bool,
    /// Decimal digits of working precision for certificates.
    pub precision: u32,
}

impl Options {
    pub fn new(mode: Mode) -> Self {
        Options {
            mode,
            substitute_estimates: false,
            precision: 50,
        }
    }
}

fn hensley_dim(set: &str, substitute: bool) -> CantorDim {
    CantorDim {
        set: set.to_string(),
        value: hensley(set).expect("imported set").to_string(),
        source: if substitute { DimSource::JpEstimate } else { DimSource::Hensley },
    }
}

fn printed_dim(set: &str) -> CantorDim {
    CantorDim {
        set: set.to_string(),
        value: printed_estimate(set).expect("published set").to_string(),
        source: DimSource::JpPrinted,
    }
}

fn sum(set: CantorDim, case: &str) -> Bound {
    let c = builtin_case(case).expect("builtin case");
    Bound::Sum {
        cantor: set,
        gap: GapDim {
            case: case.to_string(),
            s: c.s_text,
        },
    }
}

struct Layout {
    lower: &'static str,
    upper: &'static str,
    lower_closed: bool,
    bound: Bound,
    stated: Option<&'static str>,
    premises: &'static [&'static str],
}

fn piece(
    lower: &'static str,
    upper: &'static str,
    bound: Bound,
    stated: Option<&'static str>,
    premises: &'static [&'static str],
) -> Layout {
    Layout {
        lower,
        upper,
        lower_closed: false,
        bound,
        stated,
        premises,
    }
}

fn empty_tail() -> Layout {
    Layout {
        lower: "sqrt(21)",
        upper: "+inf",
        lower_closed: true,
        bound: Bound::Empty {
            source: ABOVE_SQRT21_SOURCE.to_string(),
        },
        stated: None,
        premises: &[],
    }
}

fn layout(opts: &Options) -> Vec<Layout> {
    let sub = opts.substitute_estimates;
    match opts.mode {
        Mode::Rigorous => vec![
            piece(
                "-inf",
                "sqrt(10)",
                Bound::Imported {
                    value: BELOW_SQRT10.to_string(),
                    source: BELOW_SQRT10_SOURCE.to_string(),
                },
                None,
                &[],
            ),
            piece("sqrt(10)", "sqrt(13)", sum(hensley_dim("k12", sub), "sqrt10-sqrt13"), Some("0.706104"), &["sqrt10-sqrt13"]),
            piece("sqrt(13)", "3.84", sum(hensley_dim("k123", sub), "sqrt13-3.84"), Some("0.986927"), &["sqrt13-3.84"]),
            piece("3.84", "sqrt(20)", sum(hensley_dim("k123", sub), "3.84-sqrt20"), Some("0.986927"), &["3.84-sqrt20"]),
            piece("sqrt(20)", "sqrt(21)", sum(hensley_dim("k1234", sub), "sqrt20-sqrt21"), Some("0.961772"), &["sqrt20-sqrt21"]),
            empty_tail(),
        ],
        Mode::Heuristic => vec![
            piece(
                "-inf",
                "sqrt(13)",
                Bound::Max {
                    parts: vec![
                        Bound::Scaled {
                            factor: 2,
                            cantor: printed_dim("x2-121-212"),
                            source: BELOW_3_06_SOURCE.to_string(),
                        },
                        sum(hensley_dim("k12", sub), "sqrt10-sqrt13"),
                    ],
                },
                Some("0.73"),
                &["3.06-sqrt13"],
            ),
            piece("sqrt(13)", "3.84", sum(printed_dim("x3-13-31"), "sqrt13-3.84"), Some("0.856"), &["sqrt13-3.84"]),
            piece("3.84", "3.92", sum(printed_dim("x3-131-313-231-132"), "3.84-3.92"), Some("0.872"), &["3.84-3.92"]),
            piece("3.92", "4.01", sum(printed_dim("x3-131-313-2312-2132"), "3.92-4.01"), Some("0.828"), &["3.92-4.01"]),
            piece("4.01", "sqrt(20)", sum(hensley_dim("k123", sub), "4.01-sqrt20"), Some("0.873316"), &["4.01-sqrt20"]),
            piece("sqrt(20)", "sqrt(21)", sum(printed_dim("x4-14-41-24-42"), "sqrt20-sqrt21"), Some("0.888"), &["sqrt20-sqrt21"]),
            empty_tail(),
        ],
    }
}

fn dec(s: &str) -> BigRational {
    parse_decimal(s).expect("decimal")
}

fn exact(r: &BigRational) -> String {
    format_exact(r).unwrap_or_else(|| format_decimal(r, 12, Rounding::Up))
}

fn cover_record(c: &Certificate) -> CertificateRecord {
    CertificateRecord::Cover {
        case: c.case.clone(),
        s: c.s.clone(),
        margin: c.margin.clone(),
        rule_sums: c.rules.iter().map(|r| r.sum.clone()).collect(),
        max_sum: c.max_sum.clone(),
        verdict: c.verdict,
        meets_margin: c.meets_margin,
    }
}

fn dimension_record(e: &DimEstimate, stated: Option<&str>) -> CertificateRecord {
    let within = stated.map(|p| (e.value - dec(p).to_f64_lossy()).abs() <= dec(ESTIMATE_TOLERANCE).to_f64_lossy());
    CertificateRecord::Dimension {
        set: e.set.clone(),
        order: e.order,
        value: format!("{:.10}", e.value),
        bracket: e.bracket.clone(),
        residual: e.residual.map(|r| format!("{r:.3e}")),
        label: e.label.to_string(),
        stated: stated.map(str::to_string),
        within_tolerance: within,
    }
}

trait LossyF64 {
    fn to_f64_lossy(&self) -> f64;
}

impl LossyF64 for BigRational {
    fn to_f64_lossy(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

fn gap_record(label: &str, digits: u32) -> Result<CertificateRecord> {
    let case = gap_cases()
        .into_iter()
        .find(|c| c.label == label)
        .ok_or_else(|| Error::Report(format!("no gap case `{label}`")))?;
    let g = gap_constant(&builtin_spec(case.inner)?, &builtin_spec(case.outer)?)?;
    let threshold = case.threshold();
    let holds = g.value < threshold.clone().into();
    Ok(CertificateRecord::Gap {
        label: label.to_string(),
        inner: case.inner.to_string(),
        outer: case.outer.to_string(),
        threshold: case.threshold_text.to_string(),
        value: approx(&g.value, digits),
        holds,
    })
}

/// Builds the report, computing every certificate and estimate it needs.
pub fn assemble(opts: &Options) -> Result<GlobalReport> {
    let bits = bits_for_digits(opts.precision);
    let mut pieces = layout(opts);

    // Cover certificates, one per case.
    let mut cases: Vec<String> = pieces
        .iter()
        .flat_map(|p| p.bound.gaps().into_iter().map(|g| g.case.clone()))
        .collect();
    cases.sort();
    cases.dedup();
    let covers: Vec<Certificate> = cases
        .par_iter()
        .map(|name| verify_case(&builtin_case(name)?, bits))
        .collect::<Result<_>>()?;

    // Estimates for every set whose dimension is not imported.
    let mut sets: Vec<String> = pieces
        .iter()
        .flat_map(|p| p.bound.cantor_dims().into_iter())
        .filter(|c| c.source != DimSource::Hensley)
        .map(|c| c.set.clone())
        .collect();
    sets.sort();
    sets.dedup();
    let estimates: Vec<DimEstimate> = sets
        .par_iter()
        .map(|name| {
            let sys = GaussSystem::new(&builtin_spec(name)?)?;
            estimate_dimension(&sys, default_order(&sys), JP_TOLERANCE)
        })
        .collect::<Result<_>>()?;
    let estimate_of = |set: &str| estimates.iter().find(|e| e.set == set).expect("estimated");

    // Substituted values: estimate rounded up to six digits.
    for p in &mut pieces {
        substitute(&mut p.bound, &estimate_of);
    }

    let mut premise_labels: Vec<&str> = pieces.iter().flat_map(|p| p.premises.iter().copied()).collect();
    premise_labels.sort_unstable();
    premise_labels.dedup();
    let premises: Vec<CertificateRecord> = premise_labels
        .par_iter()
        .map(|l| gap_record(l, 32))
        .collect::<Result<_>>()?;

    let built: Vec<PieceBound> = pieces
        .into_iter()
        .map(|l| {
            let value = l.bound.value();
            let mut notes = Vec::new();
            let mut verdict = true;
            for g in l.bound.gaps() {
                let c = covers.iter().find(|c| c.case == g.case).expect("verified");
                if !c.verdict {
                    verdict = false;
                    notes.push(format!("cover {} does not contract at s = {}", g.case, g.s));
                } else if !c.meets_margin {
                    notes.push(format!("cover {} exceeds its margin {}", g.case, c.margin));
                }
            }
            for c in l.bound.cantor_dims() {
                if c.source == DimSource::JpPrinted {
                    let e = estimate_of(&c.set);
                    if e.bracket.upper() > dec(&c.value) {
                        verdict = false;
                        notes.push(format!("estimate {:.6} for {} exceeds {}", e.value, c.set, c.value));
                    }
                    let dev = (e.value - dec(&c.value).to_f64_lossy()).abs();
                    if dev > dec(ESTIMATE_TOLERANCE).to_f64_lossy() {
                        notes.push(format!(
                            "estimate {:.6} for {} deviates from {} by {:.4}",
                            e.value, c.set, c.value, dev
                        ));
                    }
                }
            }
            if let (Some(v), Some(s)) = (&value, l.stated) {
                if *v > dec(s) {
                    verdict = false;
                    notes.push(format!("exact value {} exceeds stated {s}", exact(v)));
                }
            }
            let sum_bound = value.as_ref().map(exact);
            let stated = l.stated.filter(|s| value.as_ref() != Some(&dec(s))).map(str::to_string);
            PieceBound {
                lower: l.lower.to_string(),
                upper: l.upper.to_string(),
                lower_closed: l.lower_closed,
                bound: l.bound,
                sum_bound,
                stated,
                verdict,
                notes,
            }
        })
        .collect();

    let top = built
        .iter()
        .filter(|p| p.sum_bound.is_some())
        .max_by(|a, b| dec(a.sum_bound.as_ref().unwrap()).cmp(&dec(b.sum_bound.as_ref().unwrap())))
        .ok_or_else(|| Error::Report("no bounded piece".into()))?;
    let global_bound = top.sum_bound.clone().unwrap();
    let stated_global = top.stated.clone().unwrap_or_else(|| global_bound.clone());

    let label = if opts.mode == Mode::Rigorous && !opts.substitute_estimates {
        RIGOROUS
    } else {
        HEURISTIC
    };
    let mut certificates: Vec<CertificateRecord> = covers.iter().map(cover_record).collect();
    certificates.extend(estimates.iter().map(|e| dimension_record(e, printed_estimate(&e.set))));
    let premises_hold = premises
        .iter()
        .all(|p| matches!(p, CertificateRecord::Gap { holds: true, .. }));
    certificates.extend(premises);

    let report = GlobalReport {
        mode: opts.mode,
        label: label.to_string(),
        verdict: built.iter().all(|p| p.verdict),
        pieces: built,
        global_bound,
        stated_global,
        premises_hold,
        certificates,
    };
    report.check()?;
    Ok(report)
}

fn substitute<'a>(b: &mut Bound, estimate_of: &impl Fn(&str) -> &'a DimEstimate) {
    match b {
        Bound::Sum { cantor, .. } | Bound::Scaled { cantor, .. } => {
            if cantor.source == DimSource::JpEstimate {
                let e = estimate_of(&cantor.set);
                cantor.value = format_decimal(&e.bracket.upper(), 6, Rounding::Up);
            }
        }
        Bound::Max { parts } => parts.iter_mut().for_each(|p| substitute(p, estimate_of)),
        _ => {}
    }
}

impl GlobalReport {
    /// Structural invariants: the pieces tile the line, the global bound is
    /// the largest piece, and a rigorous report uses no estimates.
    pub fn check(&self) -> Result<()> {
        let first = self.pieces.first().ok_or_else(|| Error::Report("no pieces".into()))?;
        let last = self.pieces.last().unwrap();
        if first.lower != "-inf" || last.upper != "+inf" {
            return Err(Error::Report("pieces do not cover the line".into()));
        }
        for w in self.pieces.windows(2) {
            if w[0].upper != w[1].lower {
                return Err(Error::Report(format!("gap between {} and {}", w[0].interval(), w[1].interval())));
            }
        }
        for p in &self.pieces {
            if p.sum_bound.as_deref().map(dec) != p.bound.value() {
                return Err(Error::Report(format!("piece {} has an inconsistent value", p.interval())));
            }
        }
        let max = self.pieces.iter().filter_map(|p| p.bound.value()).max();
        if max.as_ref() != Some(&dec(&self.global_bound)) {
            return Err(Error::Report("global bound is not the largest piece".into()));
        }
        if self.label == RIGOROUS && self.pieces.iter().any(|p| p.bound.uses_estimates()) {
            return Err(Error::Report("rigorous report uses a heuristic estimate".into()));
        }
        Ok(())
    }

    pub fn to_structured(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable report")
    }

    pub fn from_structured(text: &str) -> Result<Self> {
        let r: GlobalReport =
            serde_json::from_str(text).map_err(|e| Error::parse(e.line(), "report", e.to_string()))?;
        r.check()?;
        Ok(r)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "mode: {} [{}]", self.mode.as_str(), self.label).unwrap();
        let width = self.pieces.iter().map(|p| p.interval().len()).max().unwrap_or(0);
        for p in &self.pieces {
            let value = match (&p.sum_bound, &p.stated) {
                (None, _) => "-".to_string(),
                (Some(v), None) => v.clone(),
                (Some(v), Some(s)) => format!("{v} < {s}"),
            };
            let verdict = if p.verdict { "PASS" } else { "FAIL" };
            writeln!(out, "  {:width$}  {value:<20}  {verdict}  {}", p.interval(), p.bound.describe()).unwrap();
            for n in &p.notes {
                writeln!(out, "  {:width$}  note: {n}", "").unwrap();
            }
        }
        if self.stated_global == self.global_bound {
            writeln!(out, "global bound: {}", self.global_bound).unwrap();
        } else {
            writeln!(out, "global bound: {} (largest piece {})", self.stated_global, self.global_bound).unwrap();
        }
        writeln!(out, "certificates:").unwrap();
        for c in &self.certificates {
            match c {
                CertificateRecord::Cover {
                    case,
                    s,
                    max_sum,
                    verdict,
                    meets_margin,
                    margin,
                    ..
                } => {
                    let v = if *verdict && *meets_margin { "PASS" } else { "FAIL" };
                    writeln!(out, "  cover {case}: s = {s}, max rule sum {max_sum} (margin {margin}) {v}").unwrap();
                }
                CertificateRecord::Dimension {
                    set,
                    order,
                    value,
                    residual,
                    label,
                    stated,
                    ..
                } => {
                    let st = stated.as_ref().map(|s| format!(", stated {s}")).unwrap_or_default();
                    let r = residual.as_deref().unwrap_or("-");
                    writeln!(out, "  dim {set}: {value} at order {order}, residual {r}{st} [{label}]").unwrap();
                }
                CertificateRecord::Gap {
                    label,
                    threshold,
                    value,
                    holds,
                    ..
                } => {
                    let v = if *holds { "holds" } else { "DOES NOT HOLD" };
                    writeln!(out, "  gap {label}: c(B,C) in {value} < {threshold}: {v}").unwrap();
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rigorous_report_reproduces_the_piece_sums() {
        let r = assemble(&Options::new(Mode::Rigorous)).unwrap();
        assert_eq!(r.global_bound, "0.986927");
        assert_eq!(r.label, RIGOROUS);
        let sums: Vec<Option<&str>> = r.pieces.iter().map(|p| p.sum_bound.as_deref()).collect();
        assert_eq!(
            sums,
            [Some("0.93"), Some("0.706104"), Some("0.986927"), Some("0.986927"), Some("0.961772"), None]
        );
        assert!(r.verdict);
        assert!(r.pieces.iter().all(|p| p.stated.is_none()));
        let back = GlobalReport::from_structured(&r.to_structured()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_structured(), r.to_structured());
    }

    #[test]
    fn tampered_reports_fail_the_check() {
        let r = assemble(&Options::new(Mode::Rigorous)).unwrap();
        let mut bad = r.clone();
        bad.global_bound = "0.93".into();
        assert!(bad.check().is_err());
        let mut bad = r.clone();
        bad.pieces.remove(2);
        assert!(bad.check().is_err());
        let mut bad = r;
        if let Bound::Sum { cantor, .. } = &mut bad.pieces[1].bound {
            cantor.source = DimSource::JpPrinted;
        }
        assert!(bad.check().is_err());
    }
}
