//! Imported constants. These are inputs to the report, not results computed
//! by this crate; each carries its source.

/// Dimension of the continued-fraction Cantor set on `{1, 2}` (Hensley).
pub const HENSLEY_K12: &str = "0.531291";
/// Dimension of the continued-fraction Cantor set on `{1, 2, 3}` (Hensley).
pub const HENSLEY_K123: &str = "0.705661";
/// Dimension of the continued-fraction Cantor set on `{1, 2, 3, 4}` (Hensley).
pub const HENSLEY_K1234: &str = "0.788947";
pub const HENSLEY_SOURCE: &str = "Hensley, imported";

/// Upper bound for the dimension of the Markov spectrum below `sqrt(10)`
/// (Cusick and Flahive, Chapter 6).
pub const BELOW_SQRT10: &str = "0.93";
pub const BELOW_SQRT10_SOURCE: &str = "Cusick-Flahive ch. 6, imported";

/// `[sqrt(21), inf)` lies in the Lagrange spectrum (Freiman; Schecker).
pub const ABOVE_SQRT21_SOURCE: &str = "Freiman, Schecker: sqrt(21) and above lie in L";

/// Markov values below 3.06 avoid `121` and `212` (Jackson, as tabulated by
/// Cusick and Flahive, Chapter 5), so that part is covered by two copies of
/// the Cantor set avoiding them.
pub const BELOW_3_06_SOURCE: &str = "m < 3.06 avoids 121, 212 (Jackson via Cusick-Flahive ch. 5)";

/// Published heuristic upper bounds for the periodic-orbit estimates, keyed
/// by catalog set.
pub const PRINTED_ESTIMATES: &[(&str, &str)] = &[
    ("x2-121-212", "0.365"),
    ("x3-13-31", "0.574"),
    ("x3-131-313-231-132", "0.612"),
    ("x3-131-313-2312-2132", "0.65"),
    ("x4-14-41-24-42", "0.715"),
];

/// Agreement demanded between an estimate and its published value.
pub const ESTIMATE_TOLERANCE: &str = "0.005";

pub fn printed_estimate(set: &str) -> Option<&'static str> {
    PRINTED_ESTIMATES.iter().find(|(s, _)| *s == set).map(|(_, v)| *v)
}

pub fn hensley(set: &str) -> Option<&'static str> {
    match set {
        "k12" => Some(HENSLEY_K12),
        "k123" => Some(HENSLEY_K123),
        "k1234" => Some(HENSLEY_K1234),
        _ => None,
    }
}
