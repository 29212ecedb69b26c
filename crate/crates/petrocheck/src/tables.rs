//! CSV tables. Floats use the same 17-digit text as the JSON output.

use std::io::{Read, Write};

use petrocheck_core::domains::DomainProfile;
use petrocheck_core::solver::GridField;
use petrocheck_core::verify::CertificateReport;

use crate::json::fmt17;
use crate::CliError;

/// Solution field, one row per stored node: `t,y,r,u`.
pub fn write_grid_field<W: Write>(field: &GridField, out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "y", "r", "u"])?;
    for (k, t) in field.t_nodes.iter().enumerate() {
        for (i, y) in field.y_nodes.iter().enumerate() {
            w.write_record([fmt17(*t), fmt17(*y), fmt17(field.r(k, i)), fmt17(field.values[k][i])])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// One row per certificate condition.
pub fn write_certificate_summary<'a, W: Write>(
    reports: impl IntoIterator<Item = &'a CertificateReport>,
    out: W,
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "subject",
        "condition",
        "sense",
        "worst_violation",
        "worst_r",
        "worst_t",
        "tolerance",
        "samples",
        "verdict",
    ])?;
    for rep in reports {
        w.write_record([
            rep.subject.clone(),
            rep.condition.clone(),
            format!("{:?}", rep.sense),
            fmt17(rep.worst_violation),
            fmt17(rep.worst_location.0),
            fmt17(rep.worst_location.1),
            fmt17(rep.tolerance),
            rep.samples.to_string(),
            format!("{:?}", rep.verdict),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Tabulated width profile from a CSV with header `t,zeta`.
pub fn read_profile<R: Read>(input: R) -> Result<DomainProfile, CliError> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = r.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Usage(format!("profile CSV lacks a `{name}` column")))
    };
    let (ti, zi) = (col("t")?, col("zeta")?);
    let mut t = Vec::new();
    let mut zeta = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record?;
        let parse = |i: usize| -> Result<f64, CliError> {
            let field = record.get(i).unwrap_or_default();
            field
                .parse()
                .map_err(|_| CliError::Usage(format!("profile CSV row {}: `{field}` is not a number", line + 2)))
        };
        t.push(parse(ti)?);
        zeta.push(parse(zi)?);
    }
    Ok(DomainProfile::tabulated(t, zeta)?)
}

pub fn write_profile<W: Write>(t: &[f64], zeta: &[f64], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "zeta"])?;
    for (a, b) in t.iter().zip(zeta) {
        w.write_record([fmt17(*a), fmt17(*b)])?;
    }
    w.flush()?;
    Ok(())
}

/// Rows of floats under a header.
pub fn write_rows<W: Write>(header: &[&str], rows: &[Vec<f64>], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|x| fmt17(*x)))?;
    }
    w.flush()?;
    Ok(())
}

/// Sweep matrix: one row per `p`, one column per `q`.
pub fn write_matrix<W: Write>(p_list: &[f64], q_list: &[f64], cells: &[Vec<String>], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["p\\q".to_string()];
    header.extend(q_list.iter().map(|q| fmt17(*q)));
    w.write_record(&header)?;
    for (p, row) in p_list.iter().zip(cells) {
        let mut record = vec![fmt17(*p)];
        record.extend(row.iter().cloned());
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_round_trip() {
        let t: Vec<f64> = (0..20).map(|i| -1.0 + 0.049 * i as f64).collect();
        let zeta: Vec<f64> = t.iter().map(|t: &f64| (-t).sqrt()).collect();
        let mut buf = Vec::new();
        write_profile(&t, &zeta, &mut buf).unwrap();
        let prof = read_profile(buf.as_slice()).unwrap();
        let direct = DomainProfile::tabulated(t.clone(), zeta.clone()).unwrap();
        assert_eq!(prof, direct);
    }

    #[test]
    fn profile_errors_name_the_problem() {
        let err = read_profile("t,width\n-1,1\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("zeta"));
        let err = read_profile("t,zeta\n-1,abc\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("row 2"));
        assert!(read_profile("t,zeta\n-0.5,1\n-1,1\n".as_bytes()).is_err());
    }
}
