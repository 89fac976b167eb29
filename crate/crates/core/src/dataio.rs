//! Source-table ingestion and the fortnight-keyed merge.
//!
//! Three CSV tables feed the pipeline: bank-rate ratios, monthly stock
//! prices and money-market instrument observations. Each is parsed
//! against an exact header, cleaned, deduplicated and joined on the
//! fortnight-ended date into the twelve-variable modeling table.

use crate::error::{Error, Result};
use chrono::{Datelike, NaiveDate};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// One row of the bank-rate table: policy repo, reverse repo and cash
/// reserve ratios as of a fortnight end.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BankRatesRecord {
    pub fortnight_ended: NaiveDate,
    pub prr: f64,
    pub rrr: f64,
    pub crr: f64,
}

/// One row of the monthly stock-index table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StockMonthlyRecord {
    pub month: NaiveDate,
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
}

/// One row of the money-market instrument table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoneyMarketRecord {
    pub fortnight_ended: NaiveDate,
    pub total_outstanding: f64,
    pub volume: f64,
    pub min_roi: f64,
    pub max_roi: f64,
}

/// One fortnight row of the merged modeling table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergedObservation {
    pub fortnight_ended: NaiveDate,
    pub volume: f64,
    pub min_roi: f64,
    pub max_roi: f64,
    pub year: i32,
    pub month: u32,
    pub day: u32,
    pub open: f64,
    pub close: f64,
    pub prr: f64,
    pub rrr: f64,
    pub crr: f64,
}

/// Row counts dropped during the merge for lack of a matching side.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MergeStats {
    pub dropped_no_stock_month: usize,
    pub dropped_no_prior_rate: usize,
}

/// The three recognized source-table layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableSchema {
    BankRates,
    StockMonthly,
    MoneyMarket,
}

impl TableSchema {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "bank_rates" => Ok(TableSchema::BankRates),
            "stock_monthly" => Ok(TableSchema::StockMonthly),
            "money_market" => Ok(TableSchema::MoneyMarket),
            other => Err(Error::Config(format!(
                "unknown schema {other:?}; expected bank_rates, stock_monthly or money_market"
            ))),
        }
    }
}

/// A typed CSV row: exact header, parse and write-back.
pub trait CsvRecord: Sized {
    const HEADERS: &'static [&'static str];

    /// Parses one data row; `line` is the 1-based line number for errors.
    fn from_fields(fields: &[String], path: &str, line: usize) -> Result<Self>;

    /// Field rendering for write-back; dates in ISO form.
    fn to_fields(&self) -> Vec<String>;

    /// The date the table is keyed and sorted on.
    fn key_date(&self) -> NaiveDate;
}

/// Parses a date in either ISO form (`2019-08-31`) or the abbreviated
/// month form seen in rate tables (`Sep. 13, 2019`). All dates are
/// normalized to ISO internally.
pub fn parse_date(text: &str) -> Option<NaiveDate> {
    let t = text.trim();
    NaiveDate::parse_from_str(t, "%Y-%m-%d")
        .or_else(|_| NaiveDate::parse_from_str(t, "%b. %d, %Y"))
        .or_else(|_| NaiveDate::parse_from_str(t, "%b %d, %Y"))
        .or_else(|_| NaiveDate::parse_from_str(t, "%B %d, %Y"))
        .ok()
}

fn field_date(fields: &[String], idx: usize, path: &str, line: usize) -> Result<NaiveDate> {
    parse_date(&fields[idx]).ok_or_else(|| Error::Row {
        path: path.to_string(),
        line,
        reason: format!("unparseable date {:?}", fields[idx]),
    })
}

fn field_num(fields: &[String], idx: usize, path: &str, line: usize) -> Result<f64> {
    let t = fields[idx].trim();
    t.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Row {
            path: path.to_string(),
            line,
            reason: format!("unparseable number {:?} in column {}", fields[idx], idx + 1),
        })
}

fn row_invariant(ok: bool, what: &str, path: &str, line: usize) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Row { path: path.to_string(), line, reason: what.to_string() })
    }
}

impl CsvRecord for BankRatesRecord {
    const HEADERS: &'static [&'static str] = &["FortnightEnded", "PRR", "RRR", "CRR"];

    fn from_fields(fields: &[String], path: &str, line: usize) -> Result<Self> {
        let rec = BankRatesRecord {
            fortnight_ended: field_date(fields, 0, path, line)?,
            prr: field_num(fields, 1, path, line)?,
            rrr: field_num(fields, 2, path, line)?,
            crr: field_num(fields, 3, path, line)?,
        };
        row_invariant(
            rec.prr >= 0.0 && rec.rrr >= 0.0 && rec.crr >= 0.0,
            "bank rates must be nonnegative",
            path,
            line,
        )?;
        Ok(rec)
    }

    fn to_fields(&self) -> Vec<String> {
        vec![
            self.fortnight_ended.format("%Y-%m-%d").to_string(),
            self.prr.to_string(),
            self.rrr.to_string(),
            self.crr.to_string(),
        ]
    }

    fn key_date(&self) -> NaiveDate {
        self.fortnight_ended
    }
}

impl CsvRecord for StockMonthlyRecord {
    const HEADERS: &'static [&'static str] = &["Month", "Open", "High", "Low", "Close"];

    fn from_fields(fields: &[String], path: &str, line: usize) -> Result<Self> {
        let rec = StockMonthlyRecord {
            month: field_date(fields, 0, path, line)?,
            open: field_num(fields, 1, path, line)?,
            high: field_num(fields, 2, path, line)?,
            low: field_num(fields, 3, path, line)?,
            close: field_num(fields, 4, path, line)?,
        };
        row_invariant(
            rec.open > 0.0 && rec.high > 0.0 && rec.low > 0.0 && rec.close > 0.0,
            "stock prices must be positive",
            path,
            line,
        )?;
        row_invariant(
            rec.low <= rec.open.min(rec.close) && rec.high >= rec.open.max(rec.close),
            "stock low/high must bracket open and close",
            path,
            line,
        )?;
        Ok(rec)
    }

    fn to_fields(&self) -> Vec<String> {
        vec![
            self.month.format("%Y-%m-%d").to_string(),
            self.open.to_string(),
            self.high.to_string(),
            self.low.to_string(),
            self.close.to_string(),
        ]
    }

    fn key_date(&self) -> NaiveDate {
        self.month
    }
}

impl CsvRecord for MoneyMarketRecord {
    const HEADERS: &'static [&'static str] =
        &["FortnightEnded", "TotalAmountOutstanding", "Volume", "MinROI", "MaxROI"];

    fn from_fields(fields: &[String], path: &str, line: usize) -> Result<Self> {
        let rec = MoneyMarketRecord {
            fortnight_ended: field_date(fields, 0, path, line)?,
            total_outstanding: field_num(fields, 1, path, line)?,
            volume: field_num(fields, 2, path, line)?,
            min_roi: field_num(fields, 3, path, line)?,
            max_roi: field_num(fields, 4, path, line)?,
        };
        row_invariant(rec.volume >= 0.0, "volume must be nonnegative", path, line)?;
        row_invariant(rec.min_roi <= rec.max_roi, "MinROI must not exceed MaxROI", path, line)?;
        Ok(rec)
    }

    fn to_fields(&self) -> Vec<String> {
        vec![
            self.fortnight_ended.format("%Y-%m-%d").to_string(),
            self.total_outstanding.to_string(),
            self.volume.to_string(),
            self.min_roi.to_string(),
            self.max_roi.to_string(),
        ]
    }

    fn key_date(&self) -> NaiveDate {
        self.fortnight_ended
    }
}

/// Reads a whole CSV table of one schema.
///
/// The header row must match the schema's column names exactly; dates are
/// normalized to ISO year-month-day and numeric fields parsed as decimals.
/// Bad rows are reported with their line number.
pub fn ingest_table<R: CsvRecord>(path: impl AsRef<Path>) -> Result<Vec<R>> {
    let path_str = path.as_ref().display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(false)
        .from_path(path.as_ref())
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::Io {
                path: path_str.clone(),
                source: std::io::Error::new(std::io::ErrorKind::NotFound, e.to_string()),
            },
            _ => Error::Row { path: path_str.clone(), line: 1, reason: e.to_string() },
        })?;

    let headers = reader
        .headers()
        .map_err(|e| Error::Row { path: path_str.clone(), line: 1, reason: e.to_string() })?
        .clone();
    if headers.len() != R::HEADERS.len() {
        return Err(Error::Schema {
            path: path_str,
            position: headers.len().min(R::HEADERS.len()),
            expected: R::HEADERS.join(","),
            found: headers.iter().collect::<Vec<_>>().join(","),
        });
    }
    for (i, expected) in R::HEADERS.iter().enumerate() {
        let found = headers.get(i).unwrap_or("");
        if found != *expected {
            return Err(Error::Schema {
                path: path_str,
                position: i,
                expected: (*expected).to_string(),
                found: found.to_string(),
            });
        }
    }

    let mut out = Vec::new();
    for record in reader.records() {
        let record =
            record.map_err(|e| Error::Row { path: path_str.clone(), line: 0, reason: e.to_string() })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let fields: Vec<String> = record.iter().map(str::to_string).collect();
        if fields.len() != R::HEADERS.len() {
            return Err(Error::Row {
                path: path_str.clone(),
                line,
                reason: format!("expected {} fields, found {}", R::HEADERS.len(), fields.len()),
            });
        }
        out.push(R::from_fields(&fields, &path_str, line)?);
    }
    Ok(out)
}

/// Writes records back out in the schema's exact CSV layout.
pub fn write_table<R: CsvRecord>(path: impl AsRef<Path>, records: &[R]) -> Result<()> {
    let path_str = path.as_ref().display().to_string();
    let mut writer = csv::Writer::from_path(path.as_ref())
        .map_err(|e| Error::Io { path: path_str.clone(), source: io_err(e) })?;
    writer
        .write_record(R::HEADERS)
        .map_err(|e| Error::Io { path: path_str.clone(), source: io_err(e) })?;
    for rec in records {
        writer
            .write_record(rec.to_fields())
            .map_err(|e| Error::Io { path: path_str.clone(), source: io_err(e) })?;
    }
    writer.flush().map_err(|e| Error::Io { path: path_str, source: e })
}

fn io_err(e: csv::Error) -> std::io::Error {
    std::io::Error::new(std::io::ErrorKind::Other, e.to_string())
}

/// Sorts ascending by date and drops duplicate dates, keeping the first
/// occurrence in file order. The output is strictly increasing.
pub fn dedupe_sort<R: CsvRecord>(records: Vec<R>) -> Vec<R> {
    let mut records = records;
    // Stable sort preserves file order within equal dates.
    records.sort_by_key(CsvRecord::key_date);
    records.dedup_by_key(|r| r.key_date());
    records
}

/// Joins the three cleaned tables on the fortnight key.
///
/// Stock open/close come from the monthly record whose calendar month
/// contains the fortnight date; bank rates from the latest record dated on
/// or before it. Fortnights lacking either side are dropped and counted.
pub fn merge_fortnight(
    mm: &[MoneyMarketRecord],
    stock: &[StockMonthlyRecord],
    rates: &[BankRatesRecord],
) -> (Vec<MergedObservation>, MergeStats) {
    let mut stats = MergeStats::default();
    let mut out = Vec::with_capacity(mm.len());
    for row in mm {
        let date = row.fortnight_ended;
        let month_rec = stock
            .iter()
            .find(|s| s.month.year() == date.year() && s.month.month() == date.month());
        let Some(month_rec) = month_rec else {
            stats.dropped_no_stock_month += 1;
            continue;
        };
        // As-of join: latest rate row dated <= the fortnight date.
        let rate_rec = rates.iter().rev().find(|r| r.fortnight_ended <= date);
        let Some(rate_rec) = rate_rec else {
            stats.dropped_no_prior_rate += 1;
            continue;
        };
        out.push(MergedObservation {
            fortnight_ended: date,
            volume: row.volume,
            min_roi: row.min_roi,
            max_roi: row.max_roi,
            year: date.year(),
            month: date.month(),
            day: date.day(),
            open: month_rec.open,
            close: month_rec.close,
            prr: rate_rec.prr,
            rrr: rate_rec.rrr,
            crr: rate_rec.crr,
        });
    }
    (out, stats)
}

/// How the train/validation split orders rows before cutting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitMode {
    /// Earliest rows become the training part (no temporal leakage).
    Chronological,
    /// Deterministic seeded permutation before the cut.
    Shuffled,
}

/// Splits rows into train and validation parts.
///
/// The training part holds `floor(train_fraction * n)` rows; the two parts
/// partition the input.
pub fn split_train_validation<T>(
    rows: Vec<T>,
    train_fraction: f64,
    mode: SplitMode,
    seed: u64,
) -> Result<(Vec<T>, Vec<T>)> {
    if rows.len() < 2 {
        return Err(Error::Size(format!("cannot split {} rows", rows.len())));
    }
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Config(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let mut rows = rows;
    if mode == SplitMode::Shuffled {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rows.shuffle(&mut rng);
    }
    let n_train = (train_fraction * rows.len() as f64).floor() as usize;
    let validation = rows.split_off(n_train);
    Ok((rows, validation))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::io::Write;

    fn date(y: i32, m: u32, d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, d).unwrap()
    }

    fn write_tmp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn ingest_bank_rates_abbreviated_dates() {
        let f = write_tmp("FortnightEnded,PRR,RRR,CRR\nSep. 13, 2019, 5.4, 5.15, 4.0\n");
        let rows: Vec<BankRatesRecord> = ingest_table(f.path()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].fortnight_ended, date(2019, 9, 13));
        assert_eq!(rows[0].prr, 5.4);
        assert_eq!(rows[0].rrr, 5.15);
        assert_eq!(rows[0].crr, 4.0);
    }

    #[test]
    fn ingest_empty_file_with_header() {
        let f = write_tmp("FortnightEnded,PRR,RRR,CRR\n");
        let rows: Vec<BankRatesRecord> = ingest_table(f.path()).unwrap();
        assert!(rows.is_empty());
    }

    #[test]
    fn ingest_money_market_iso_dates() {
        let f = write_tmp(
            "FortnightEnded,TotalAmountOutstanding,Volume,MinROI,MaxROI\n2019-08-31,497176.75,77603.30,5.37,13.39\n",
        );
        let rows: Vec<MoneyMarketRecord> = ingest_table(f.path()).unwrap();
        assert_eq!(rows[0].fortnight_ended, date(2019, 8, 31));
        assert_eq!(rows[0].total_outstanding, 497176.75);
        assert_eq!(rows[0].volume, 77603.30);
        assert_eq!(rows[0].min_roi, 5.37);
        assert_eq!(rows[0].max_roi, 13.39);
    }

    #[test]
    fn ingest_rejects_header_mismatch() {
        let f = write_tmp("FortnightEnded,PRR,RR,CRR\n");
        let err = ingest_table::<BankRatesRecord>(f.path()).unwrap_err();
        match err {
            Error::Schema { expected, found, position, .. } => {
                assert_eq!(expected, "RRR");
                assert_eq!(found, "RR");
                assert_eq!(position, 2);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn ingest_reports_row_line_numbers() {
        let f = write_tmp("FortnightEnded,PRR,RRR,CRR\n2019-09-13,5.4,5.15,4.0\n2019-09-27,bad,5.15,4.0\n");
        let err = ingest_table::<BankRatesRecord>(f.path()).unwrap_err();
        match err {
            Error::Row { line, .. } => assert_eq!(line, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn ingest_rejects_invariant_violations() {
        let f = write_tmp(
            "FortnightEnded,TotalAmountOutstanding,Volume,MinROI,MaxROI\n2019-08-31,1.0,5.0,9.0,7.0\n",
        );
        assert!(matches!(
            ingest_table::<MoneyMarketRecord>(f.path()),
            Err(Error::Row { .. })
        ));
    }

    fn mm(y: i32, m: u32, d: u32, volume: f64) -> MoneyMarketRecord {
        MoneyMarketRecord {
            fortnight_ended: date(y, m, d),
            total_outstanding: 10.0 * volume,
            volume,
            min_roi: 5.0,
            max_roi: 9.0,
        }
    }

    #[test]
    fn dedupe_sort_keeps_first_and_orders() {
        let rows = vec![mm(2019, 3, 1, 3.0), mm(2019, 1, 1, 1.0), mm(2019, 1, 1, 99.0), mm(2019, 2, 1, 2.0)];
        let out = dedupe_sort(rows);
        let vols: Vec<f64> = out.iter().map(|r| r.volume).collect();
        assert_eq!(vols, vec![1.0, 2.0, 3.0]);
        let sorted_again = dedupe_sort(out.clone());
        assert_eq!(sorted_again, out);
    }

    fn stock(y: i32, m: u32, open: f64, close: f64) -> StockMonthlyRecord {
        StockMonthlyRecord {
            month: date(y, m, 1),
            open,
            high: open.max(close) + 10.0,
            low: open.min(close) - 10.0,
            close,
        }
    }

    fn rate(y: i32, m: u32, d: u32, prr: f64) -> BankRatesRecord {
        BankRatesRecord { fortnight_ended: date(y, m, d), prr, rrr: prr - 0.25, crr: 4.0 }
    }

    #[test]
    fn merge_broadcasts_month_and_joins_rates_as_of() {
        let mm_rows = vec![mm(2019, 8, 2, 13107.1423), mm(2019, 8, 16, 16349.4598)];
        let stock_rows = vec![stock(2019, 8, 37387.18, 37332.79)];
        let rate_rows = vec![rate(2019, 8, 2, 5.75), rate(2019, 8, 16, 5.40)];
        let (merged, stats) = merge_fortnight(&mm_rows, &stock_rows, &rate_rows);
        assert_eq!(merged.len(), 2);
        // Both August fortnights carry the same monthly open/close.
        for row in &merged {
            assert_eq!(row.open, 37387.18);
            assert_eq!(row.close, 37332.79);
        }
        // Exact-date match picks that day's rate; the later row picks 5.40.
        assert_eq!(merged[0].prr, 5.75);
        assert_eq!(merged[1].prr, 5.40);
        assert_eq!(stats, MergeStats::default());
        assert_eq!(merged[1].year, 2019);
        assert_eq!(merged[1].month, 8);
        assert_eq!(merged[1].day, 16);
    }

    #[test]
    fn merge_drops_and_counts_unmatched_rows() {
        let mm_rows = vec![mm(2019, 7, 15, 1.0), mm(2019, 8, 2, 2.0), mm(2019, 6, 30, 3.0)];
        let stock_rows = vec![stock(2019, 8, 100.0, 101.0), stock(2019, 7, 90.0, 91.0)];
        let rate_rows = vec![rate(2019, 7, 1, 5.0)];
        let (merged, stats) = merge_fortnight(&dedupe_sort(mm_rows), &stock_rows, &rate_rows);
        // June has no stock record; the stock check runs before the rate check.
        assert_eq!(stats.dropped_no_stock_month, 1);
        assert_eq!(stats.dropped_no_prior_rate, 0);
        assert_eq!(merged.len(), 2);
    }

    #[test]
    fn merge_empty_input() {
        let (merged, stats) = merge_fortnight(&[], &[stock(2019, 8, 1.0, 1.0)], &[rate(2019, 8, 1, 5.0)]);
        assert!(merged.is_empty());
        assert_eq!(stats, MergeStats::default());
    }

    #[test]
    fn split_sizes_match_floor_rule() {
        let rows: Vec<u32> = (0..219).collect();
        let (train, val) =
            split_train_validation(rows, 0.8, SplitMode::Chronological, 0).unwrap();
        assert_eq!(train.len(), 175);
        assert_eq!(val.len(), 44);
        assert_eq!(train[0], 0);
        assert_eq!(*val.last().unwrap(), 218);
    }

    #[test]
    fn split_is_a_partition() {
        let rows: Vec<u32> = (0..10).collect();
        let (train, val) = split_train_validation(rows.clone(), 0.5, SplitMode::Shuffled, 7).unwrap();
        assert_eq!(train.len(), 5);
        assert_eq!(val.len(), 5);
        let mut all: Vec<u32> = train.iter().chain(val.iter()).copied().collect();
        all.sort_unstable();
        assert_eq!(all, rows);
    }

    #[test]
    fn split_shuffled_is_seed_deterministic() {
        let rows: Vec<u32> = (0..50).collect();
        let a = split_train_validation(rows.clone(), 0.8, SplitMode::Shuffled, 99).unwrap();
        let b = split_train_validation(rows, 0.8, SplitMode::Shuffled, 99).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn split_rejects_tiny_input() {
        assert!(matches!(
            split_train_validation(vec![1], 0.5, SplitMode::Chronological, 0),
            Err(Error::Size(_))
        ));
    }

    proptest! {
        #[test]
        fn roundtrip_money_market(rows in proptest::collection::vec(
            (2000i32..2030, 1u32..13, 1u32..28, 0.0..1e6f64, 0.0..20.0f64, 0.0..10.0f64),
            0..30,
        )) {
            let records: Vec<MoneyMarketRecord> = rows
                .iter()
                .map(|&(y, m, d, vol, roi, spread)| MoneyMarketRecord {
                    fortnight_ended: date(y, m, d),
                    total_outstanding: vol * 3.0,
                    volume: vol,
                    min_roi: roi,
                    max_roi: roi + spread,
                })
                .collect();
            let f = tempfile::NamedTempFile::new().unwrap();
            write_table(f.path(), &records).unwrap();
            let back: Vec<MoneyMarketRecord> = ingest_table(f.path()).unwrap();
            prop_assert_eq!(back, records);
        }

        #[test]
        fn merge_dates_subset_and_rate_is_latest_prior(
            mm_days in proptest::collection::vec((1u32..13, 1u32..28), 1..40),
            rate_days in proptest::collection::vec((1u32..13, 1u32..28), 1..40),
        ) {
            let mm_rows = dedupe_sort(
                mm_days.iter().map(|&(m, d)| mm(2019, m, d, 100.0)).collect(),
            );
            let rate_rows = dedupe_sort(
                rate_days
                    .iter()
                    .enumerate()
                    .map(|(i, &(m, d))| rate(2019, m, d, 5.0 + i as f64))
                    .collect::<Vec<_>>(),
            );
            let stock_rows: Vec<StockMonthlyRecord> =
                (1..13).map(|m| stock(2019, m, 50.0 + m as f64, 51.0 + m as f64)).collect();
            let (merged, _) = merge_fortnight(&mm_rows, &stock_rows, &rate_rows);

            let mm_dates: Vec<NaiveDate> = mm_rows.iter().map(|r| r.fortnight_ended).collect();
            let mut seen = std::collections::BTreeSet::new();
            for row in &merged {
                prop_assert!(mm_dates.contains(&row.fortnight_ended));
                prop_assert!(seen.insert(row.fortnight_ended), "duplicate fortnight in merge");
                // Chosen rate date <= row date with nothing strictly between.
                let chosen = rate_rows
                    .iter()
                    .find(|r| r.prr == row.prr)
                    .expect("merged rate exists in source");
                prop_assert!(chosen.fortnight_ended <= row.fortnight_ended);
                for r in &rate_rows {
                    let strictly_between = r.fortnight_ended > chosen.fortnight_ended
                        && r.fortnight_ended <= row.fortnight_ended;
                    prop_assert!(!strictly_between);
                }
            }
        }
    }
}
