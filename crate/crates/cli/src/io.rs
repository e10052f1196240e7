use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use qri::grouped::GroupedBins;
use qri::{fixtures, SortedSample};

use crate::CliError;

/// Reads a whole file, mapping failures to a usage error.
pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Fails early when the output directory does not exist.
pub fn check_output(path: Option<&PathBuf>) -> Result<(), CliError> {
    if let Some(path) = path {
        let parent = path.parent().filter(|p| !p.as_os_str().is_empty());
        if let Some(dir) = parent {
            if !dir.is_dir() {
                return Err(CliError::Usage(format!("output directory {} does not exist", dir.display())));
            }
        }
    }
    Ok(())
}

/// Parses a one-column CSV of incomes. A non-numeric first row is taken as
/// a header; blank lines are skipped.
pub fn parse_incomes(text: &str) -> Result<Vec<f64>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut values = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::parse(format!("row {}: {e}", row + 1)))?;
        let Some(field) = record.get(0).filter(|f| !f.is_empty()) else {
            continue;
        };
        match field.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if row == 0 => {}
            Err(_) => return Err(CliError::parse(format!("row {}: `{field}` is not a number", row + 1))),
        }
    }
    Ok(values)
}

pub fn read_sample(path: &Path) -> Result<SortedSample, CliError> {
    let values = parse_incomes(&read_text(path)?)?;
    Ok(SortedSample::new(values)?)
}

/// Loads a bin table from a path, or a bundled table named `dwi:YEAR` or
/// `nhw:YEAR`.
pub fn read_bins(source: &str) -> Result<GroupedBins, CliError> {
    if let Some((kind @ ("dwi" | "nhw"), year)) = source.split_once(':') {
        let year: Option<u16> = year.parse().ok();
        let table = match (kind, year) {
            ("dwi", Some(y)) => fixtures::dwi(y),
            ("nhw", Some(y)) => fixtures::nhw(y),
            _ => None,
        };
        return match table {
            Some(parsed) => Ok(parsed?),
            None => Err(CliError::Usage(format!(
                "unknown bundled table `{source}` (years: {:?})",
                fixtures::YEARS
            ))),
        };
    }
    Ok(GroupedBins::parse(&read_text(Path::new(source))?)?)
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(path: Option<&PathBuf>, body: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}")))
        }
    }
}

pub fn income_csv(values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 12 + 8);
    out.push_str("income\n");
    for v in values {
        out.push_str(&format!("{v}\n"));
    }
    out
}

pub fn curve_csv(header: &str, rows: &[(f64, f64)]) -> String {
    let mut out = format!("{header}\n");
    for (x, y) in rows {
        out.push_str(&format!("{x},{y}\n"));
    }
    out
}
