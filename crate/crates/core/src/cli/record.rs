use serde::{Deserialize, Serialize};

/// One line of sweep output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRecord {
    pub p: u64,
    pub d: usize,
    pub f: usize,
    pub theta: usize,
    pub omega: u64,
    pub per_class_s: Vec<usize>,
    pub g: usize,
    pub methods_agree: bool,
    /// `None` when no closed form exists for this d.
    pub closed_form_match: Option<bool>,
    pub elapsed_ms: u64,
}

impl SweepRecord {
    pub fn key(&self) -> (u64, usize) {
        (self.p, self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub const CSV_HEADER: &str = "p,d,f,theta,omega,per_class_s,g,methods_agree,closed_form_match,elapsed_ms";

// Field order here is the output order.
#[derive(Serialize, Deserialize)]
struct JsonRecord {
    p: String,
    d: String,
    f: String,
    theta: String,
    omega: String,
    per_class_s: Vec<String>,
    g: String,
    methods_agree: bool,
    closed_form_match: Option<bool>,
    elapsed_ms: String,
}

/// Renders one record without a trailing newline. Integers are written as
/// decimal strings; `elapsed_ms` is always last so it can be split off when
/// comparing runs.
pub fn emit(record: &SweepRecord, format: Format) -> String {
    match format {
        Format::Json => {
            let j = JsonRecord {
                p: record.p.to_string(),
                d: record.d.to_string(),
                f: record.f.to_string(),
                theta: record.theta.to_string(),
                omega: record.omega.to_string(),
                per_class_s: record.per_class_s.iter().map(ToString::to_string).collect(),
                g: record.g.to_string(),
                methods_agree: record.methods_agree,
                closed_form_match: record.closed_form_match,
                elapsed_ms: record.elapsed_ms.to_string(),
            };
            serde_json::to_string(&j).expect("plain strings serialize")
        }
        Format::Csv => {
            let s: Vec<String> = record.per_class_s.iter().map(ToString::to_string).collect();
            let closed = match record.closed_form_match {
                Some(true) => "true",
                Some(false) => "false",
                None => "na",
            };
            format!(
                "{},{},{},{},{},{},{},{},{},{}",
                record.p,
                record.d,
                record.f,
                record.theta,
                record.omega,
                s.join(";"),
                record.g,
                record.methods_agree,
                closed,
                record.elapsed_ms
            )
        }
    }
}

/// The line with its timing field removed.
pub fn deterministic_part(line: &str, format: Format) -> String {
    match format {
        Format::Json => match line.rfind(",\"elapsed_ms\"") {
            Some(i) => format!("{}}}", &line[..i]),
            None => line.to_string(),
        },
        Format::Csv => match line.rfind(',') {
            Some(i) => line[..i].to_string(),
            None => line.to_string(),
        },
    }
}

/// (p, d) of a previously written line; `None` for headers and junk.
pub fn parse_key(line: &str, format: Format) -> Option<(u64, usize)> {
    match format {
        Format::Json => {
            let j: JsonRecord = serde_json::from_str(line).ok()?;
            Some((j.p.parse().ok()?, j.d.parse().ok()?))
        }
        Format::Csv => {
            let mut fields = line.split(',');
            let p = fields.next()?.parse().ok()?;
            let d = fields.next()?.parse().ok()?;
            Some((p, d))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SweepRecord {
        SweepRecord {
            p: 7,
            d: 3,
            f: 2,
            theta: 0,
            omega: 3,
            per_class_s: vec![1, 2, 3],
            g: 3,
            methods_agree: true,
            closed_form_match: Some(true),
            elapsed_ms: 12,
        }
    }

    #[test]
    fn json_field_order() {
        let line = emit(&sample(), Format::Json);
        assert_eq!(
            line,
            r#"{"p":"7","d":"3","f":"2","theta":"0","omega":"3","per_class_s":["1","2","3"],"g":"3","methods_agree":true,"closed_form_match":true,"elapsed_ms":"12"}"#
        );
        let value: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(value["g"], "3");
        assert!(value["elapsed_ms"].as_str().unwrap().parse::<u64>().is_ok());
        assert_eq!(parse_key(&line, Format::Json), Some((7, 3)));
        assert!(!deterministic_part(&line, Format::Json).contains("elapsed"));
        assert!(serde_json::from_str::<serde_json::Value>(&deterministic_part(&line, Format::Json)).is_ok());
    }

    #[test]
    fn csv_row() {
        let mut r = sample();
        r.closed_form_match = None;
        let line = emit(&r, Format::Csv);
        assert_eq!(line, "7,3,2,0,3,1;2;3,3,true,na,12");
        assert_eq!(CSV_HEADER.split(',').count(), line.split(',').count());
        assert_eq!(parse_key(&line, Format::Csv), Some((7, 3)));
        assert_eq!(parse_key(CSV_HEADER, Format::Csv), None);
        assert_eq!(deterministic_part(&line, Format::Csv), "7,3,2,0,3,1;2;3,3,true,na");
    }
}
