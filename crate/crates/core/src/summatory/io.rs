//! Checkpoint CSV: optional leading `#` comment lines, header `x,M,L`, then
//! one row per checkpoint in ascending `x`.

use std::fs;
use std::path::Path;

use super::{Checkpoint, WalkSeries};
use crate::output::CsvDoc;
use crate::{Error, Result};

const HEADER: &str = "x,M,L";

pub fn to_csv(series: &WalkSeries, comment: Option<&str>) -> String {
    let mut doc = CsvDoc::new(comment, HEADER);
    for c in series.checkpoints() {
        doc.row([c.x.to_string(), c.m.to_string(), c.l.to_string()]);
    }
    doc.as_str().to_owned()
}

pub fn from_csv(text: &str) -> Result<WalkSeries> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .skip_while(|(_, l)| l.starts_with('#'));
    match lines.next() {
        Some((_, h)) if h == HEADER => {}
        Some((line, h)) => {
            return Err(Error::Parse {
                line,
                message: format!("expected header `{HEADER}`, found `{h}`"),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                message: "missing header".into(),
            })
        }
    }
    let mut checkpoints: Vec<Checkpoint> = Vec::new();
    for (line, row) in lines {
        let parse_err = |message: String| Error::Parse { line, message };
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 3 {
            return Err(parse_err(format!("expected 3 fields, found {}", fields.len())));
        }
        let x: u64 = fields[0]
            .parse()
            .map_err(|e| parse_err(format!("bad x `{}`: {e}", fields[0])))?;
        let m: i64 = fields[1]
            .parse()
            .map_err(|e| parse_err(format!("bad M `{}`: {e}", fields[1])))?;
        let l: i64 = fields[2]
            .parse()
            .map_err(|e| parse_err(format!("bad L `{}`: {e}", fields[2])))?;
        let c = Checkpoint::new(x, m, l);
        if let Some(prev) = checkpoints.last() {
            if prev.x >= x {
                return Err(parse_err(format!("x = {x} does not exceed previous x = {}", prev.x)));
            }
        }
        if !super::checkpoint_plausible(&c) {
            return Err(parse_err(format!("values out of range for x = {x}: M = {m}, L = {l}")));
        }
        checkpoints.push(c);
    }
    WalkSeries::new(checkpoints)
}

pub fn save_checkpoints(series: &WalkSeries, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_csv(series, None)).map_err(|e| Error::io(path, e))
}

pub fn load_checkpoints(path: impl AsRef<Path>) -> Result<WalkSeries> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_csv(&text)
}
