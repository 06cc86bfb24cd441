//! Closing-price matrices and the price CSV format.
//!
//! ```text
//! date,AAA,BBB
//! 2024-01-02,100.0,20.5
//! 2024-01-03,101.2,20.1
//! ```
//!
//! One header row (`date` then one ticker per column), ISO-8601 dates in
//! strictly increasing order, decimal prices. Missing cells are rejected.

use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;

use crate::error::{QhdeError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PriceMatrix {
    tickers: Vec<String>,
    dates: Vec<NaiveDate>,
    /// Row `t` holds the closing prices of every asset on `dates[t]`.
    prices: Vec<Vec<f64>>,
}

impl PriceMatrix {
    /// Validated constructor. Errors name the offending observation row and
    /// asset column (both 0-based).
    pub fn new(tickers: Vec<String>, dates: Vec<NaiveDate>, prices: Vec<Vec<f64>>) -> Result<Self> {
        if tickers.is_empty() {
            return Err(QhdeError::Parse("price matrix has no assets".into()));
        }
        if dates.len() != prices.len() {
            return Err(QhdeError::Parse(format!(
                "{} dates for {} price rows",
                dates.len(),
                prices.len()
            )));
        }
        if prices.len() < 3 {
            return Err(QhdeError::Parse(format!(
                "need at least 3 observations for two returns, got {}",
                prices.len()
            )));
        }
        for (row, values) in prices.iter().enumerate() {
            if values.len() != tickers.len() {
                return Err(QhdeError::Ingestion {
                    row,
                    column: values.len().min(tickers.len()),
                    reason: format!("{} prices for {} tickers", values.len(), tickers.len()),
                });
            }
            for (column, p) in values.iter().enumerate() {
                if !(p.is_finite() && *p > 0.0) {
                    return Err(QhdeError::Ingestion {
                        row,
                        column,
                        reason: format!("price {p} is not positive"),
                    });
                }
            }
            if row > 0 && dates[row] <= dates[row - 1] {
                return Err(QhdeError::Ingestion {
                    row,
                    column: 0,
                    reason: format!("date {} does not follow {}", dates[row], dates[row - 1]),
                });
            }
        }
        Ok(Self {
            tickers,
            dates,
            prices,
        })
    }

    pub fn tickers(&self) -> &[String] {
        &self.tickers
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn prices(&self) -> &[Vec<f64>] {
        &self.prices
    }

    pub fn assets(&self) -> usize {
        self.tickers.len()
    }

    pub fn periods(&self) -> usize {
        self.prices.len()
    }

    /// Simple per-period returns, one row per consecutive pair of observations.
    pub fn simple_returns(&self) -> Vec<Vec<f64>> {
        self.prices
            .windows(2)
            .map(|w| {
                w[1].iter()
                    .zip(&w[0])
                    .map(|(now, prev)| (now - prev) / prev)
                    .collect()
            })
            .collect()
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = rdr
            .headers()
            .map_err(|e| QhdeError::Parse(format!("price CSV header: {e}")))?
            .clone();
        if header.get(0).map(str::to_ascii_lowercase).as_deref() != Some("date") {
            return Err(QhdeError::Parse(
                "price CSV header must start with a `date` column".into(),
            ));
        }
        let tickers: Vec<String> = header.iter().skip(1).map(str::to_string).collect();

        let mut dates = Vec::new();
        let mut prices = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| QhdeError::Ingestion {
                row,
                column: 0,
                reason: e.to_string(),
            })?;
            let date_cell = record.get(0).unwrap_or("");
            let date = NaiveDate::parse_from_str(date_cell, "%Y-%m-%d").map_err(|e| {
                QhdeError::Ingestion {
                    row,
                    column: 0,
                    reason: format!("bad date {date_cell:?}: {e}"),
                }
            })?;
            let values = (0..tickers.len())
                .map(|column| {
                    let cell = record.get(column + 1).unwrap_or("");
                    if cell.is_empty() {
                        return Err(QhdeError::Ingestion {
                            row,
                            column,
                            reason: "missing price".into(),
                        });
                    }
                    cell.parse::<f64>().map_err(|e| QhdeError::Ingestion {
                        row,
                        column,
                        reason: format!("bad price {cell:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            dates.push(date);
            prices.push(values);
        }
        Self::new(tickers, dates, prices)
    }

    pub fn read_csv_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| QhdeError::io(path, e))?;
        Self::read_csv(std::io::BufReader::new(file))
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        let to_err = |e: csv::Error| QhdeError::Parse(format!("writing price CSV: {e}"));
        let mut header = vec!["date".to_string()];
        header.extend(self.tickers.iter().cloned());
        wtr.write_record(&header).map_err(to_err)?;
        for (date, row) in self.dates.iter().zip(&self.prices) {
            let mut record = vec![date.format("%Y-%m-%d").to_string()];
            record.extend(row.iter().map(|p| p.to_string()));
            wtr.write_record(&record).map_err(to_err)?;
        }
        wtr.flush()
            .map_err(|e| QhdeError::Parse(format!("writing price CSV: {e}")))
    }
}
