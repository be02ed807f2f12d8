//! Parameter sweeps, trend detection, and tabular output.

mod sweep;
mod table;
mod trends;

pub use sweep::{run_sweep, Exclusion, Grid, SweepRecord, SweepRow, SweepSpec, TIE_TOLERANCE};
pub use table::{
    fmt_real, read_long_csv, write_long_csv, write_summary_csv, Series, SeriesPoint, LONG_HEADER,
    SUMMARY_HEADER,
};
pub use trends::{
    detect_trends, even_bump, BumpProfile, GridPoint, LastBestException, SpreadPeak, TrendSummary,
};
