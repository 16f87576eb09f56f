//! Per-iteration progress records and their CSV form.
//!
//! One record per optimizer step (MOST epoch, gradient step, GA generation).
//! The CSV layout is `step,x1..xn,f,w1..wn,seconds`; the width columns are
//! present only for interval-based optimizers (they are MOST's per-variable
//! interval widths) and are omitted entirely for the others.

use std::io::{Read, Write};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    /// Iteration index; strictly increasing within a trace, starting at 0 or 1.
    pub step: usize,
    /// Current estimate of the minimizer.
    pub estimate: Vec<f64>,
    /// Objective value at the estimate.
    pub value: f64,
    /// Per-variable interval widths; empty for optimizers without intervals.
    pub widths: Vec<f64>,
    /// Wall-clock seconds since the run started.
    pub seconds: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    records: Vec<TraceRecord>,
}

/// Formats a float with 17 significant digits, enough for exact f64
/// round-trips through text.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a record. Panics if the step index does not increase or the
    /// record shape (estimate/width arity) differs from earlier records —
    /// both indicate a driver bug, not a runtime condition.
    pub fn push(&mut self, record: TraceRecord) {
        if let Some(last) = self.records.last() {
            assert!(
                record.step > last.step,
                "trace steps must strictly increase ({} after {})",
                record.step,
                last.step
            );
            assert_eq!(
                record.estimate.len(),
                last.estimate.len(),
                "trace estimate arity changed mid-run"
            );
            assert_eq!(
                record.widths.len(),
                last.widths.len(),
                "trace width arity changed mid-run"
            );
        } else {
            assert!(record.step <= 1, "first trace step must be 0 or 1");
        }
        assert!(
            record.widths.is_empty() || record.widths.len() == record.estimate.len(),
            "widths must be empty or match the estimate arity"
        );
        self.records.push(record);
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    pub fn last(&self) -> Option<&TraceRecord> {
        self.records.last()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let first = self
            .records
            .first()
            .ok_or_else(|| Error::MalformedTrace("cannot serialize an empty trace".into()))?;
        let n = first.estimate.len();
        let has_widths = !first.widths.is_empty();

        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["step".to_string()];
        header.extend((1..=n).map(|j| format!("x{j}")));
        header.push("f".into());
        if has_widths {
            header.extend((1..=n).map(|j| format!("w{j}")));
        }
        header.push("seconds".into());
        w.write_record(&header)?;

        for rec in &self.records {
            let mut row = vec![rec.step.to_string()];
            row.extend(rec.estimate.iter().copied().map(fmt_f64));
            row.push(fmt_f64(rec.value));
            row.extend(rec.widths.iter().copied().map(fmt_f64));
            row.push(fmt_f64(rec.seconds));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::MalformedTrace(e.to_string()))
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Trace> {
        let mut reader = csv::Reader::from_reader(input);
        let header = reader.headers()?.clone();
        let cols: Vec<&str> = header.iter().collect();

        // Expect: step, x1..xn, f, [w1..wn,] seconds
        let f_pos = cols
            .iter()
            .position(|&c| c == "f")
            .ok_or_else(|| Error::MalformedTrace("missing 'f' column".into()))?;
        if cols.first() != Some(&"step") || cols.last() != Some(&"seconds") {
            return Err(Error::MalformedTrace(
                "header must start with 'step' and end with 'seconds'".into(),
            ));
        }
        let n = f_pos - 1;
        let n_widths = cols.len() - f_pos - 2;
        if n == 0 || (n_widths != 0 && n_widths != n) {
            return Err(Error::MalformedTrace(format!(
                "unexpected column layout: {} estimate and {} width columns",
                n, n_widths
            )));
        }

        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::MalformedTrace(format!("bad float field {s:?}")))
        };

        let mut trace = Trace::new();
        for row in reader.records() {
            let row = row?;
            if row.len() != cols.len() {
                return Err(Error::MalformedTrace(format!(
                    "row has {} fields, header has {}",
                    row.len(),
                    cols.len()
                )));
            }
            let step: usize = row[0]
                .parse()
                .map_err(|_| Error::MalformedTrace(format!("bad step field {:?}", &row[0])))?;
            let estimate = (1..=n)
                .map(|i| parse(&row[i]))
                .collect::<Result<Vec<_>>>()?;
            let value = parse(&row[f_pos])?;
            let widths = (f_pos + 1..f_pos + 1 + n_widths)
                .map(|i| parse(&row[i]))
                .collect::<Result<Vec<_>>>()?;
            let seconds = parse(&row[cols.len() - 1])?;
            trace.push(TraceRecord {
                step,
                estimate,
                value,
                widths,
                seconds,
            });
        }
        Ok(trace)
    }
}
