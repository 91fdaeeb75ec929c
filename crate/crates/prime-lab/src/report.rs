//! Reproduction of the benchmark tables T1–T4: exact sieved counts beside
//! model predictions, as structured rows with CSV and Markdown emission.
//!
//! Emission conventions follow the reference tables being reproduced:
//! integer statistic columns take the integer part (T1) or nearest integer
//! (T3/T4 deviation column), reals carry three decimals, and the T1
//! difference column uses the logarithmic integral with lower limit 0.
//! Where a reference entry is itself inconsistent with the defining
//! formulas, the recomputed value is emitted and the row carries a note.

use crate::error::{Error, Result};
use crate::logint::{li, Tol};
use crate::models;
use crate::sieve::{Sieve, TuplePattern};
use crate::singular::{singular_series, SingularConstant};

/// li(2): offset between the ∫₂ˣ integrals used everywhere in this crate and
/// the classical li(x) = ∫₀ˣ convention. The reference difference column is
/// the nearest integer to li(x) − π(x); only this column needs the offset.
const LI_LOWER_LIMIT_OFFSET: f64 = 1.0451637801174927;

/// The reference tables evaluate the deviation bound √x·ln x/(8π) with π
/// taken to two decimals; reproducing their integers requires the same
/// constant. `models::riemann_bound` uses the exact π.
const REFERENCE_EIGHT_PI: f64 = 25.12;

/// Classical π(x) values beyond the default desk-scale sieve budget.
const REFERENCE_PRIME_COUNTS: &[(u64, u64)] = &[
    (10_000_000_000, 455_052_511),
    (100_000_000_000, 4_118_054_813),
    (1_000_000_000_000, 37_607_912_018),
];

/// Quadrature tolerance for table cells.
const TABLE_TOL: Tol = Tol::Rel(1e-10);
/// Singular-constant tail tolerance for table cells.
const CONSTANT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
}

impl TableId {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "1" | "T1" => Ok(TableId::T1),
            "2" | "T2" => Ok(TableId::T2),
            "3" | "T3" => Ok(TableId::T3),
            "4" | "T4" => Ok(TableId::T4),
            other => Err(Error::Parse(format!("unknown table id {other:?}"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TableId::T1 => "T1",
            TableId::T2 => "T2",
            TableId::T3 => "T3",
            TableId::T4 => "T4",
        }
    }

    /// Row limits used when the caller does not supply any.
    pub fn default_xs(self) -> &'static [u64] {
        match self {
            TableId::T1 | TableId::T2 => &[
                100_000_000,
                1_000_000_000,
                10_000_000_000,
                100_000_000_000,
                1_000_000_000_000,
            ],
            TableId::T3 => &[100_000, 1_000_000, 10_000_000],
            TableId::T4 => &[1_000_000, 10_000_000, 100_000_000],
        }
    }

    /// The column whose absence marks a row as analytic-only.
    fn exactness_col(self) -> &'static str {
        match self {
            TableId::T1 => "pi",
            TableId::T2 => "actual_minus_model_gap",
            TableId::T3 => "pi2",
            TableId::T4 => "pi3",
        }
    }

    fn schema(self) -> &'static [(&'static str, ColType)] {
        match self {
            TableId::T1 => &[
                ("pi", ColType::Int),
                ("li_minus_pi", ColType::Int),
                ("sigma_model1", ColType::Int),
                ("sigma_model2", ColType::Int),
                ("riemann_bound", ColType::Int),
            ],
            TableId::T2 => &[
                ("sigma_model1", ColType::Int),
                ("mean_gap_z", ColType::Real),
                ("actual_minus_model_gap", ColType::Real),
                ("deviation_at_minus_sigma", ColType::Real),
            ],
            TableId::T3 => &[
                ("sigma_tuple", ColType::Int),
                ("mean_gap_h", ColType::Real),
                ("gap_at_plus_sigma", ColType::Real),
                ("gap_at_minus_sigma", ColType::Real),
                ("pi2", ColType::Int),
                ("actual_mean_gap", ColType::Real),
                ("actual_minus_model", ColType::Real),
            ],
            TableId::T4 => &[
                ("sigma_tuple", ColType::Int),
                ("mean_gap_h", ColType::Real),
                ("gap_at_plus_3sigma", ColType::Real),
                ("gap_at_minus_3sigma", ColType::Real),
                ("pi3", ColType::Int),
                ("actual_mean_gap", ColType::Real),
                ("actual_minus_model", ColType::Real),
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColType {
    Int,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CellValue {
    Int(i64),
    /// Stored already rounded to three decimals, so emission and re-parsing
    /// are exact round trips.
    Real(f64),
    Absent,
}

impl CellValue {
    fn emit(&self) -> String {
        match self {
            CellValue::Int(v) => v.to_string(),
            CellValue::Real(v) => format!("{v:.3}"),
            CellValue::Absent => String::new(),
        }
    }
}

/// One reproduced table row.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub table: TableId,
    pub x: u64,
    pub cells: Vec<(&'static str, CellValue)>,
    pub exact_available: bool,
    pub notes: Vec<String>,
}

impl TableRow {
    pub fn get(&self, name: &str) -> Option<CellValue> {
        self.cells.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
    }

    pub fn int(&self, name: &str) -> Option<i64> {
        match self.get(name)? {
            CellValue::Int(v) => Some(v),
            _ => None,
        }
    }

    pub fn real(&self, name: &str) -> Option<f64> {
        match self.get(name)? {
            CellValue::Real(v) => Some(v),
            _ => None,
        }
    }
}

/// Three-decimal rounding used for every real cell.
fn round3(v: f64) -> f64 {
    let r = (v * 1000.0).round() / 1000.0;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn int_cell(v: f64) -> CellValue {
    CellValue::Int(v as i64)
}

enum CountSource {
    Exact(u64),
    Reference(u64),
    Unavailable,
}

/// Computes table rows against one sieve.
pub struct Reporter<'a> {
    sieve: &'a Sieve,
}

impl<'a> Reporter<'a> {
    pub fn new(sieve: &'a Sieve) -> Self {
        Reporter { sieve }
    }

    pub fn table(&self, id: TableId, xs: &[u64]) -> Result<Vec<TableRow>> {
        if xs.is_empty() {
            return Err(Error::Domain("at least one x value is required".into()));
        }
        match id {
            TableId::T1 => self.table1(xs),
            TableId::T2 => self.table2(xs),
            TableId::T3 => self.table3(xs),
            TableId::T4 => self.table4(xs),
        }
    }

    fn count(&self, pattern: &TuplePattern, x: u64) -> Result<CountSource> {
        match self.sieve.tuple_count(pattern, x) {
            Ok(rec) => Ok(CountSource::Exact(rec.count)),
            Err(Error::BudgetExceeded { .. }) => {
                if pattern.k() == 1 {
                    if let Some(&(_, c)) =
                        REFERENCE_PRIME_COUNTS.iter().find(|&&(rx, _)| rx == x)
                    {
                        return Ok(CountSource::Reference(c));
                    }
                }
                Ok(CountSource::Unavailable)
            }
            Err(e) => Err(e),
        }
    }

    /// Prime counts, count/Li difference, both model deviations, and the
    /// Riemann-conjecture bound.
    pub fn table1(&self, xs: &[u64]) -> Result<Vec<TableRow>> {
        xs.iter()
            .map(|&x| {
                let xf = x as f64;
                let l = li(xf, 1, TABLE_TOL)?.value;
                let s1 = models::model1_stats(xf)?.sigma;
                let s2 = models::model2_stats(xf)?.sigma;
                let mut notes = Vec::new();
                let (pi_cell, diff_cell, exact) = match self.count(&TuplePattern::single(), x)? {
                    CountSource::Exact(c) => (
                        CellValue::Int(c as i64),
                        CellValue::Int((l + LI_LOWER_LIMIT_OFFSET - c as f64).round() as i64),
                        true,
                    ),
                    CountSource::Reference(c) => {
                        notes.push(format!(
                            "x={x}: pi taken from built-in reference values (beyond the sieve budget)"
                        ));
                        (
                            CellValue::Int(c as i64),
                            CellValue::Int((l + LI_LOWER_LIMIT_OFFSET - c as f64).round() as i64),
                            true,
                        )
                    }
                    CountSource::Unavailable => (CellValue::Absent, CellValue::Absent, false),
                };
                if x == 1_000_000_000 {
                    notes.push(format!(
                        "x={x}: reference prints 7091/7089 for the deviation columns; direct \
                         evaluation of the variance formulas gives the emitted values"
                    ));
                }
                Ok(TableRow {
                    table: TableId::T1,
                    x,
                    cells: vec![
                        ("pi", pi_cell),
                        ("li_minus_pi", diff_cell),
                        ("sigma_model1", int_cell(s1.floor())),
                        ("sigma_model2", int_cell(s2.floor())),
                        (
                            "riemann_bound",
                            int_cell((xf.sqrt() * xf.ln() / REFERENCE_EIGHT_PI).floor()),
                        ),
                    ],
                    exact_available: exact,
                    notes,
                })
            })
            .collect()
    }

    /// Expected average prime gap x/Li(x) and its deviations.
    pub fn table2(&self, xs: &[u64]) -> Result<Vec<TableRow>> {
        xs.iter()
            .map(|&x| {
                let xf = x as f64;
                let l = li(xf, 1, TABLE_TOL)?.value;
                let sigma = models::model1_stats(xf)?.sigma;
                let (actual_cell, exact) = match self.count(&TuplePattern::single(), x)? {
                    CountSource::Exact(c) | CountSource::Reference(c) => (
                        CellValue::Real(round3(xf / c as f64 - xf / l)),
                        true,
                    ),
                    CountSource::Unavailable => (CellValue::Absent, false),
                };
                Ok(TableRow {
                    table: TableId::T2,
                    x,
                    cells: vec![
                        ("sigma_model1", int_cell(sigma.floor())),
                        ("mean_gap_z", CellValue::Real(round3(xf / l))),
                        ("actual_minus_model_gap", actual_cell),
                        (
                            "deviation_at_minus_sigma",
                            CellValue::Real(round3(xf / (l - sigma) - xf / l)),
                        ),
                    ],
                    exact_available: exact,
                    notes: Vec::new(),
                })
            })
            .collect()
    }

    /// Twin primes: ±1σ interval around the expected average gap.
    pub fn table3(&self, xs: &[u64]) -> Result<Vec<TableRow>> {
        let constant = singular_series(&TuplePattern::twin(), CONSTANT_TOL)?;
        self.tuple_table(TableId::T3, &constant, 1.0, "pi2", xs, |x, notes| {
            if x == 100_000 {
                notes.push(format!(
                    "x={x}: reference prints 80.064 for the expected gap; x/(C·Li_2(x)) \
                     evaluates to the emitted value"
                ));
            }
        })
    }

    /// Triples (p, p+4, p+6): ±3σ interval around the expected average gap.
    pub fn table4(&self, xs: &[u64]) -> Result<Vec<TableRow>> {
        let pattern = TuplePattern::new(vec![0, 4, 6])?;
        let constant = singular_series(&pattern, CONSTANT_TOL)?;
        self.tuple_table(TableId::T4, &constant, 3.0, "pi3", xs, |x, notes| {
            notes.push(format!(
                "x={x}: reference deviation column appears displaced by one row; emitted from \
                 the variance formula at this x"
            ));
            if x == 10_000_000 {
                notes.push(format!(
                    "x={x}: reference row is internally inconsistent (its −3σ endpoint lies \
                     below the expected gap); all cells recomputed from the model"
                ));
            }
        })
    }

    fn tuple_table(
        &self,
        id: TableId,
        constant: &SingularConstant,
        s: f64,
        count_col: &'static str,
        xs: &[u64],
        annotate: impl Fn(u64, &mut Vec<String>),
    ) -> Result<Vec<TableRow>> {
        xs.iter()
            .map(|&x| {
                let xf = x as f64;
                let stats = models::tuple_stats_with_constant(constant, xf)?;
                let (mean, sigma) = (stats.mean, stats.sigma);
                let mean_gap = xf / mean;
                let plus = CellValue::Real(round3(xf / (mean + s * sigma)));
                let minus = if mean - s * sigma > 0.0 {
                    CellValue::Real(round3(xf / (mean - s * sigma)))
                } else {
                    CellValue::Absent
                };
                let mut notes = Vec::new();
                let (count_cell, actual, diff, exact) =
                    match self.count(&constant.pattern, x)? {
                        CountSource::Exact(c) | CountSource::Reference(c) => (
                            CellValue::Int(c as i64),
                            CellValue::Real(round3(xf / c as f64)),
                            CellValue::Real(round3(xf / c as f64 - mean_gap)),
                            true,
                        ),
                        CountSource::Unavailable => {
                            (CellValue::Absent, CellValue::Absent, CellValue::Absent, false)
                        }
                    };
                annotate(x, &mut notes);
                let (plus_name, minus_name) = if id == TableId::T3 {
                    ("gap_at_plus_sigma", "gap_at_minus_sigma")
                } else {
                    ("gap_at_plus_3sigma", "gap_at_minus_3sigma")
                };
                Ok(TableRow {
                    table: id,
                    x,
                    cells: vec![
                        ("sigma_tuple", int_cell(sigma.round())),
                        ("mean_gap_h", CellValue::Real(round3(mean_gap))),
                        (plus_name, plus),
                        (minus_name, minus),
                        (count_col, count_cell),
                        ("actual_mean_gap", actual),
                        ("actual_minus_model", diff),
                    ],
                    exact_available: exact,
                    notes,
                })
            })
            .collect()
    }
}

fn check_homogeneous(rows: &[TableRow]) -> Result<TableId> {
    let first = rows
        .first()
        .ok_or_else(|| Error::Domain("no rows to emit".into()))?;
    if rows.iter().any(|r| r.table != first.table) {
        return Err(Error::Domain("rows from different tables".into()));
    }
    Ok(first.table)
}

/// CSV: a header of column names, one row per x, UTF-8, LF line endings,
/// `.` decimal separator. Notes ride along as `# note` comment lines.
pub fn to_csv(rows: &[TableRow]) -> Result<String> {
    let id = check_homogeneous(rows)?;
    let mut out = String::from("table,x");
    for (name, _) in id.schema() {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for row in rows {
        out.push_str(id.name());
        out.push(',');
        out.push_str(&row.x.to_string());
        for (_, v) in &row.cells {
            out.push(',');
            out.push_str(&v.emit());
        }
        out.push('\n');
        for note in &row.notes {
            out.push_str("# note ");
            out.push_str(note);
            out.push('\n');
        }
    }
    Ok(out)
}

/// Markdown pipe table mirroring the reference layout; notes become
/// emphasized lines after the table.
pub fn to_markdown(rows: &[TableRow]) -> Result<String> {
    let id = check_homogeneous(rows)?;
    let mut out = format!("### {}\n\n", id.name());
    out.push_str("| x |");
    for (name, _) in id.schema() {
        out.push_str(&format!(" {name} |"));
    }
    out.push_str("\n|---|");
    for _ in id.schema() {
        out.push_str("---|");
    }
    out.push('\n');
    for row in rows {
        out.push_str(&format!("| {} |", row.x));
        for (_, v) in &row.cells {
            out.push_str(&format!(" {} |", v.emit()));
        }
        out.push('\n');
    }
    let mut any = false;
    for row in rows {
        for note in &row.notes {
            if !any {
                out.push('\n');
                any = true;
            }
            out.push_str(&format!("_note {note}_\n"));
        }
    }
    Ok(out)
}

fn parse_cell(text: &str, ty: ColType) -> Result<CellValue> {
    let t = text.trim();
    if t.is_empty() {
        return Ok(CellValue::Absent);
    }
    Ok(match ty {
        ColType::Int => CellValue::Int(
            t.parse()
                .map_err(|_| Error::Parse(format!("bad integer cell {t:?}")))?,
        ),
        ColType::Real => CellValue::Real(
            t.parse()
                .map_err(|_| Error::Parse(format!("bad real cell {t:?}")))?,
        ),
    })
}

fn attach_note(rows: &mut [TableRow], note: &str) {
    if let Some(x) = note
        .strip_prefix("x=")
        .and_then(|rest| rest.split(':').next())
        .and_then(|x| x.parse::<u64>().ok())
    {
        if let Some(row) = rows.iter_mut().rev().find(|r| r.x == x) {
            row.notes.push(note.to_string());
        }
    }
}

/// Parse the output of [`to_csv`] back into rows.
pub fn parse_csv(text: &str) -> Result<Vec<TableRow>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty csv".into()))?;
    let mut cols = header.split(',');
    if cols.next() != Some("table") || cols.next() != Some("x") {
        return Err(Error::Parse("csv header must start with table,x".into()));
    }
    let names: Vec<&str> = cols.collect();
    let mut rows: Vec<TableRow> = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        if let Some(note) = line.strip_prefix("# note ") {
            attach_note(&mut rows, note);
            continue;
        }
        let mut fields = line.split(',');
        let id = TableId::parse(
            fields
                .next()
                .ok_or_else(|| Error::Parse("missing table field".into()))?,
        )?;
        let schema = id.schema();
        if names.len() != schema.len()
            || names.iter().zip(schema).any(|(n, (s, _))| n != s)
        {
            return Err(Error::Parse(format!(
                "csv header does not match the {} schema",
                id.name()
            )));
        }
        let x = fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| Error::Parse("bad x field".into()))?;
        let mut cells = Vec::with_capacity(schema.len());
        for (name, ty) in schema {
            let field = fields
                .next()
                .ok_or_else(|| Error::Parse(format!("missing {name} cell")))?;
            cells.push((*name, parse_cell(field, *ty)?));
        }
        if fields.next().is_some() {
            return Err(Error::Parse("trailing csv fields".into()));
        }
        let exact_available = exactness(id, &cells);
        rows.push(TableRow { table: id, x, cells, exact_available, notes: Vec::new() });
    }
    Ok(rows)
}

fn exactness(id: TableId, cells: &[(&'static str, CellValue)]) -> bool {
    cells
        .iter()
        .find(|(n, _)| *n == id.exactness_col())
        .is_some_and(|(_, v)| !matches!(v, CellValue::Absent))
}

/// Parse the output of [`to_markdown`] back into rows.
pub fn parse_markdown(text: &str) -> Result<Vec<TableRow>> {
    let mut id = None;
    let mut names: Vec<String> = Vec::new();
    let mut rows: Vec<TableRow> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if let Some(h) = line.strip_prefix("### ") {
            id = Some(TableId::parse(h.trim())?);
            continue;
        }
        if let Some(note) = line.strip_prefix('_').and_then(|l| l.strip_suffix('_')) {
            if let Some(body) = note.strip_prefix("note ") {
                attach_note(&mut rows, body);
            }
            continue;
        }
        if !line.starts_with('|') {
            continue;
        }
        let fields: Vec<&str> = line
            .trim_matches('|')
            .split('|')
            .map(str::trim)
            .collect();
        if fields.iter().all(|f| f.chars().all(|c| c == '-') && !f.is_empty()) {
            continue; // separator row
        }
        if names.is_empty() {
            if fields.first() != Some(&"x") {
                return Err(Error::Parse("markdown header must start with x".into()));
            }
            names = fields[1..].iter().map(|s| s.to_string()).collect();
            continue;
        }
        let id = id.ok_or_else(|| Error::Parse("missing table heading".into()))?;
        let schema = id.schema();
        if names.len() != schema.len()
            || names.iter().zip(schema).any(|(n, (s, _))| n != s)
        {
            return Err(Error::Parse(format!(
                "markdown header does not match the {} schema",
                id.name()
            )));
        }
        let x = fields[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad x cell {:?}", fields[0])))?;
        if fields.len() != schema.len() + 1 {
            return Err(Error::Parse("markdown row width mismatch".into()));
        }
        let mut cells = Vec::with_capacity(schema.len());
        for ((name, ty), field) in schema.iter().zip(&fields[1..]) {
            cells.push((*name, parse_cell(field, *ty)?));
        }
        let exact_available = exactness(id, &cells);
        rows.push(TableRow { table: id, x, cells, exact_available, notes: Vec::new() });
    }
    if rows.is_empty() {
        return Err(Error::Parse("no markdown rows found".into()));
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_row(row: &TableRow, ints: &[(&str, i64)], reals: &[(&str, f64)]) {
        for &(name, expect) in ints {
            assert_eq!(row.int(name), Some(expect), "x={} col {name}", row.x);
        }
        for &(name, expect) in reals {
            let got = row.real(name).unwrap_or_else(|| panic!("{name} absent"));
            assert!(
                (got - expect).abs() < 5e-4,
                "x={} col {name}: {got} vs {expect}",
                row.x
            );
        }
    }

    #[test]
    fn table1_reproduces_reference_rows() {
        let sieve = Sieve::new();
        let rows = Reporter::new(&sieve)
            .table1(&[100_000_000, 10_000_000_000, 100_000_000_000, 1_000_000_000_000])
            .unwrap();
        assert_row(
            &rows[0],
            &[
                ("pi", 5_761_455),
                ("li_minus_pi", 754),
                ("sigma_model1", 2330),
                ("sigma_model2", 2329),
                ("riemann_bound", 7333),
            ],
            &[],
        );
        // counts beyond the budget come from the reference list
        assert_row(
            &rows[1],
            &[
                ("pi", 455_052_511),
                ("li_minus_pi", 3104),
                ("sigma_model1", 20841),
                ("sigma_model2", 20839),
                ("riemann_bound", 91663),
            ],
            &[],
        );
        assert!(rows[1].notes.iter().any(|n| n.contains("reference values")));
        assert_row(
            &rows[2],
            &[
                ("li_minus_pi", 11588),
                ("sigma_model1", 62836),
                ("sigma_model2", 62834),
                ("riemann_bound", 318851),
            ],
            &[],
        );
        assert_row(
            &rows[3],
            &[
                ("pi", 37_607_912_018),
                ("li_minus_pi", 38263),
                ("sigma_model1", 190246),
                ("sigma_model2", 190239),
                ("riemann_bound", 1_099_961),
            ],
            &[],
        );
    }

    #[test]
    fn table2_reproduces_reference_rows() {
        let sieve = Sieve::new();
        let rows = Reporter::new(&sieve)
            .table2(&[100_000_000, 10_000_000_000])
            .unwrap();
        assert_row(
            &rows[0],
            &[("sigma_model1", 2330)],
            &[
                ("mean_gap_z", 17.354),
                ("actual_minus_model_gap", 0.002),
                ("deviation_at_minus_sigma", 0.007),
            ],
        );
        assert_row(
            &rows[1],
            &[("sigma_model1", 20841)],
            &[
                ("mean_gap_z", 21.975),
                ("actual_minus_model_gap", 0.000),
                ("deviation_at_minus_sigma", 0.001),
            ],
        );
    }

    #[test]
    fn table3_reproduces_reference_rows() {
        let sieve = Sieve::new();
        let rows = Reporter::new(&sieve)
            .table3(&[100_000, 1_000_000, 10_000_000])
            .unwrap();
        assert_row(
            &rows[0],
            &[("sigma_tuple", 35), ("pi2", 1224)],
            &[
                ("mean_gap_h", 80.083),
                ("gap_at_plus_sigma", 77.898),
                ("gap_at_minus_sigma", 82.394),
                ("actual_mean_gap", 81.699),
                ("actual_minus_model", 1.617),
            ],
        );
        assert!(rows[0].notes.iter().any(|n| n.contains("80.064")));
        assert_row(
            &rows[1],
            &[("sigma_tuple", 90), ("pi2", 8169)],
            &[
                ("mean_gap_h", 121.241),
                ("gap_at_plus_sigma", 119.927),
                ("gap_at_minus_sigma", 122.585),
                ("actual_mean_gap", 122.414),
                ("actual_minus_model", 1.173),
            ],
        );
        assert_row(
            &rows[2],
            &[("sigma_tuple", 242), ("pi2", 58_980)],
            &[
                ("mean_gap_h", 170.202),
                ("gap_at_plus_sigma", 169.505),
                ("gap_at_minus_sigma", 170.905),
                ("actual_mean_gap", 169.549),
                ("actual_minus_model", -0.653),
            ],
        );
    }

    #[test]
    fn table4_reproduces_recomputed_rows() {
        let sieve = Sieve::new();
        let rows = Reporter::new(&sieve)
            .table4(&[1_000_000, 10_000_000, 100_000_000])
            .unwrap();
        assert_row(
            &rows[0],
            &[("sigma_tuple", 38), ("pi3", 1_444)],
            &[
                ("mean_gap_h", 691.483),
                ("gap_at_plus_3sigma", 641.372),
                ("gap_at_minus_3sigma", 750.090),
                ("actual_mean_gap", 692.521),
                ("actual_minus_model", 1.037),
            ],
        );
        assert_row(
            &rows[1],
            &[("sigma_tuple", 93), ("pi3", 8_677)],
            &[
                ("mean_gap_h", 1163.977),
                ("gap_at_plus_3sigma", 1127.553),
                ("gap_at_minus_3sigma", 1202.833),
                ("actual_mean_gap", 1152.472),
                ("actual_minus_model", -11.505),
            ],
        );
        assert!(rows[1].notes.iter().any(|n| n.contains("inconsistent")));
        assert_row(
            &rows[2],
            &[("sigma_tuple", 235), ("pi3", 55_556)],
            &[
                ("mean_gap_h", 1802.098),
                ("gap_at_plus_3sigma", 1779.448),
                ("actual_mean_gap", 1799.986),
                ("actual_minus_model", -2.113),
            ],
        );
        // raw value 1825.33250…: within half an ulp-of-display of the
        // rounding boundary, so the third decimal depends on the constant's
        // truncation level
        let got = rows[2].real("gap_at_minus_3sigma").unwrap();
        assert!((got - 1825.3325).abs() < 1.5e-3, "{got}");
    }

    #[test]
    fn containment_and_endpoint_ordering() {
        let sieve = Sieve::new();
        let rows = Reporter::new(&sieve)
            .table3(&[100_000, 1_000_000, 10_000_000])
            .unwrap();
        for row in &rows {
            let lo = row.real("gap_at_plus_sigma").unwrap();
            let hi = row.real("gap_at_minus_sigma").unwrap();
            let mid = row.real("mean_gap_h").unwrap();
            let actual = row.real("actual_mean_gap").unwrap();
            assert!(lo < mid && mid < hi, "ordering broken at x={}", row.x);
            assert!(
                lo <= actual && actual <= hi,
                "containment broken at x={}",
                row.x
            );
        }
    }

    #[test]
    fn above_budget_rows_lose_count_columns() {
        let sieve = Sieve::new().with_budget(1_000_000);
        let rows = Reporter::new(&sieve).table3(&[10_000_000]).unwrap();
        assert!(!rows[0].exact_available);
        assert_eq!(rows[0].get("pi2"), Some(CellValue::Absent));
        assert_eq!(rows[0].get("actual_mean_gap"), Some(CellValue::Absent));
        // model columns survive
        assert!(rows[0].int("sigma_tuple").is_some());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let sieve = Sieve::new().with_budget(1_000_000);
        for rows in [
            Reporter::new(&sieve).table3(&[100_000, 1_000_000, 10_000_000]).unwrap(),
            Reporter::new(&sieve).table1(&[100_000, 10_000_000_000]).unwrap(),
        ] {
            let text = to_csv(&rows).unwrap();
            let back = parse_csv(&text).unwrap();
            assert_eq!(rows.len(), back.len());
            for (a, b) in rows.iter().zip(&back) {
                assert_eq!(a.table, b.table);
                assert_eq!(a.x, b.x);
                assert_eq!(a.cells, b.cells);
                assert_eq!(a.exact_available, b.exact_available);
                assert_eq!(a.notes, b.notes);
            }
        }
    }

    #[test]
    fn markdown_round_trip_preserves_values() {
        let sieve = Sieve::new().with_budget(10_000_000);
        let rows = Reporter::new(&sieve).table4(&[1_000_000, 10_000_000]).unwrap();
        let text = to_markdown(&rows).unwrap();
        let back = parse_markdown(&text).unwrap();
        assert_eq!(rows.len(), back.len());
        for (a, b) in rows.iter().zip(&back) {
            assert_eq!(a.table, b.table);
            assert_eq!(a.x, b.x);
            assert_eq!(a.cells, b.cells);
            assert_eq!(a.notes, b.notes);
        }
    }

    #[test]
    fn mixed_tables_are_rejected() {
        let sieve = Sieve::new().with_budget(1_000_000);
        let mut rows = Reporter::new(&sieve).table3(&[100_000]).unwrap();
        rows.extend(Reporter::new(&sieve).table2(&[100_000]).unwrap());
        assert!(to_csv(&rows).is_err());
    }

    #[test]
    fn small_x_smoke_row() {
        let sieve = Sieve::new();
        let rows = Reporter::new(&sieve).table1(&[100]).unwrap();
        assert_eq!(rows[0].int("pi"), Some(25));
        for (name, _) in TableId::T1.schema() {
            match rows[0].get(name).unwrap() {
                CellValue::Int(v) => assert!(v > 0 || *name == "li_minus_pi"),
                other => panic!("unexpected {other:?}"),
            }
        }
    }
}
