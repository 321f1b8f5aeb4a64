use serde::Serialize;

/// Reference qubit counts `N2` for `w = 1..=3` (rows) and `K = 1..=6`.
pub const REFERENCE_N2: [[usize; 6]; 3] = [
    [8, 8, 12, 12, 16, 16],
    [10, 16, 16, 20, 22, 24],
    [20, 20, 24, 24, 28, 28],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    FourOne,
    TwoKPlusOne,
    SquareW,
    ThisFamily,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyRow {
    pub family: Family,
    pub name: String,
    pub formula: String,
    pub w: usize,
    pub k: usize,
    pub n: usize,
    pub rate: f64,
}

/// Code families compared by rate, evaluated at `(w, k)`.
pub fn family_rows(w: usize, k: usize) -> Vec<FamilyRow> {
    let row = |family, name: &str, formula: &str, w, k, n: usize| FamilyRow {
        family,
        name: name.to_string(),
        formula: formula.to_string(),
        w,
        k,
        n,
        rate: k as f64 / n as f64,
    };
    vec![
        row(Family::FourOne, "[[4,1]]", "1/4", 1, 1, 4),
        row(Family::TwoKPlusOne, "[[2(K+1),K]]", "(1/2) K/(K+1)", 1, k, 2 * (k + 1)),
        row(Family::SquareW, "[[(w+1)^2,1]]", "1/(w+1)^2", w, 1, (w + 1) * (w + 1)),
        row(
            Family::ThisFamily,
            "[[(w+1)(w+K),K]]",
            "(1/(w+1)) K/(K+w)",
            w,
            k,
            (w + 1) * (w + k),
        ),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateRow {
    pub w: usize,
    pub k: usize,
    pub n1: usize,
    pub n2: usize,
    pub rate_n1: f64,
    pub rate_n2: f64,
    /// `N1 < N2`.
    pub fewer: bool,
    /// `N1 <= N2`.
    pub at_most: bool,
}

/// All 18 `(w, K)` comparisons, row-major in `w`.
pub fn rate_tables() -> Vec<RateRow> {
    let mut rows = Vec::with_capacity(18);
    for (wi, n2s) in REFERENCE_N2.iter().enumerate() {
        for (ki, &n2) in n2s.iter().enumerate() {
            let (w, k) = (wi + 1, ki + 1);
            let n1 = (w + 1) * (w + k);
            rows.push(RateRow {
                w,
                k,
                n1,
                n2,
                rate_n1: k as f64 / n1 as f64,
                rate_n2: k as f64 / n2 as f64,
                fewer: n1 < n2,
                at_most: n1 <= n2,
            });
        }
    }
    rows
}
