//! CSV persistence for sweep results.
//!
//! Long form: `n,p,q,mode,pos,win_prob`, one row per position.
//! Summary: `n,p,q,mode,argmin,argmax,spread,expected_steps`, one row per
//! record. Reals carry 12 significant digits; lines end in LF.

use std::io::{Read, Write};

use serde::Serialize;

use super::sweep::SweepRecord;
use crate::error::{KnockoutError, Result};
use crate::model::MatrixMode;

pub const LONG_HEADER: [&str; 6] = ["n", "p", "q", "mode", "pos", "win_prob"];
pub const SUMMARY_HEADER: [&str; 8] = [
    "n",
    "p",
    "q",
    "mode",
    "argmin",
    "argmax",
    "spread",
    "expected_steps",
];

/// Rounds to 12 significant digits and prints the shortest decimal that
/// reads back as that rounded value. Never uses exponent notation.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn csv_err(e: csv::Error) -> KnockoutError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => KnockoutError::Io(io),
        other => KnockoutError::Schema(format!("{other:?}")),
    }
}

pub fn write_long_csv<W: Write>(out: W, records: &[SweepRecord]) -> Result<()> {
    let mut w = writer(out);
    w.write_record(LONG_HEADER).map_err(csv_err)?;
    for r in records {
        for (i, &prob) in r.win_probs.iter().enumerate() {
            w.write_record([
                r.n.to_string(),
                fmt_real(r.p),
                fmt_real(r.q),
                r.mode.to_string(),
                (i + 1).to_string(),
                fmt_real(prob),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary_csv<W: Write>(out: W, records: &[SweepRecord]) -> Result<()> {
    let mut w = writer(out);
    w.write_record(SUMMARY_HEADER).map_err(csv_err)?;
    for r in records {
        w.write_record([
            r.n.to_string(),
            fmt_real(r.p),
            fmt_real(r.q),
            r.mode.to_string(),
            r.argmin_position.to_string(),
            r.argmax_position.to_string(),
            fmt_real(r.spread),
            fmt_real(r.expected_steps_game),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesPoint {
    pub pos: usize,
    pub win_prob: f64,
    /// The value exactly as it appeared in the file.
    pub raw: String,
}

/// All long-form rows sharing one `(n, p, q, mode)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub n: usize,
    pub p: String,
    pub q: String,
    pub mode: MatrixMode,
    pub points: Vec<SeriesPoint>,
}

impl Series {
    pub fn label(&self) -> String {
        format!("n={} p={} q={} {}", self.n, self.p, self.q, self.mode)
    }
}

/// Reads a long-form file back into series, in order of first appearance.
pub fn read_long_csv<R: Read>(input: R) -> Result<Vec<Series>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header = rdr.headers().map_err(csv_err)?.clone();
    if header.iter().ne(LONG_HEADER) {
        return Err(KnockoutError::Schema(format!(
            "expected header {:?}, found {:?}",
            LONG_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }

    let mut series: Vec<Series> = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let bad = |what: &str| KnockoutError::Schema(format!("data row {}: bad {what}", line + 1));
        let n: usize = rec[0].parse().map_err(|_| bad("n"))?;
        let (p, q) = (rec[1].to_string(), rec[2].to_string());
        p.parse::<f64>().map_err(|_| bad("p"))?;
        q.parse::<f64>().map_err(|_| bad("q"))?;
        let mode: MatrixMode = rec[3].parse().map_err(|_| bad("mode"))?;
        let pos: usize = rec[4].parse().map_err(|_| bad("pos"))?;
        let win_prob: f64 = rec[5].parse().map_err(|_| bad("win_prob"))?;
        if pos == 0 || pos > n {
            return Err(bad("pos (outside 1..=n)"));
        }
        if !(0.0..=1.0).contains(&win_prob) {
            return Err(bad("win_prob (outside [0, 1])"));
        }
        let point = SeriesPoint {
            pos,
            win_prob,
            raw: rec[5].to_string(),
        };
        match series
            .iter_mut()
            .find(|s| s.n == n && s.p == p && s.q == q && s.mode == mode)
        {
            Some(s) => s.points.push(point),
            None => series.push(Series {
                n,
                p,
                q,
                mode,
                points: vec![point],
            }),
        }
    }
    if series.is_empty() {
        return Err(KnockoutError::Schema("no data rows".into()));
    }
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ShotParams;

    #[test]
    fn real_formatting() {
        assert_eq!(fmt_real(0.4), "0.4");
        assert_eq!(fmt_real(0.0), "0");
        assert_eq!(fmt_real(-0.0), "0");
        assert_eq!(fmt_real(1.0), "1");
        assert_eq!(fmt_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_real(0.1 + 0.2), "0.3");
        assert_eq!(fmt_real(3051.2820512820513), "3051.28205128");
        assert_eq!(fmt_real(1.23456789012345e-7), "0.000000123456789012");
    }

    fn sample() -> Vec<SweepRecord> {
        let sp = ShotParams::new(0.4, 0.9).unwrap();
        vec![
            SweepRecord::from_win_probs(2, sp, MatrixMode::Corrected, vec![1.0 / 2.6, 1.6 / 2.6])
                .unwrap(),
        ]
    }

    #[test]
    fn long_and_summary_layout() {
        let mut long = Vec::new();
        write_long_csv(&mut long, &sample()).unwrap();
        assert_eq!(
            String::from_utf8(long).unwrap(),
            "n,p,q,mode,pos,win_prob\n2,0.4,0.9,corrected,1,0.384615384615\n2,0.4,0.9,corrected,2,0.615384615385\n"
        );
        let mut summary = Vec::new();
        write_summary_csv(&mut summary, &sample()).unwrap();
        assert_eq!(
            String::from_utf8(summary).unwrap(),
            "n,p,q,mode,argmin,argmax,spread,expected_steps\n2,0.4,0.9,corrected,1,2,0.230769230769,4.35897435897\n"
        );
    }

    #[test]
    fn read_back_groups_series() {
        let mut long = Vec::new();
        write_long_csv(&mut long, &sample()).unwrap();
        let s = read_long_csv(long.as_slice()).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].points.len(), 2);
        assert_eq!(s[0].points[1].raw, "0.615384615385");
        assert_eq!(s[0].label(), "n=2 p=0.4 q=0.9 corrected");
    }

    #[test]
    fn schema_errors() {
        assert!(read_long_csv("".as_bytes()).is_err());
        assert!(read_long_csv("n,p,q,mode,pos,win_prob\n".as_bytes()).is_err());
        assert!(read_long_csv("a,b\n1,2\n".as_bytes()).is_err());
        assert!(
            read_long_csv("n,p,q,mode,pos,win_prob\n2,0.4,0.9,other,1,0.5\n".as_bytes()).is_err()
        );
        assert!(
            read_long_csv("n,p,q,mode,pos,win_prob\n2,0.4,0.9,paper,3,0.5\n".as_bytes()).is_err()
        );
        assert!(
            read_long_csv("n,p,q,mode,pos,win_prob\n2,0.4,0.9,paper,1,x\n".as_bytes()).is_err()
        );
    }
}
