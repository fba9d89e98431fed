//! Serialization conventions shared by every output file: floats carry 17
//! significant digits, files are UTF-8 with LF endings.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::{Error, Result};

/// `v` with 17 significant digits, e.g. `6.0792710185402660e-1`.
/// Non-finite values are written as `nan`, `inf` or `-inf`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// JSON formatter writing floats through [`fmt_f64`]. Non-finite floats
/// become `null`.
struct PreciseFormatter(serde_json::ser::PrettyFormatter<'static>);

impl serde_json::ser::Formatter for PreciseFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        if v.is_finite() {
            w.write_all(fmt_f64(v).as_bytes())
        } else {
            w.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty JSON with 17-digit floats and a trailing newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut buf, PreciseFormatter(serde_json::ser::PrettyFormatter::new()));
    value.serialize(&mut ser).expect("serializing plain data cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Accumulates CSV text with a leading provenance comment.
#[derive(Debug, Clone)]
pub struct CsvDoc {
    text: String,
}

impl CsvDoc {
    /// `comment` is written as `# <comment>`; pass `None` for a bare file.
    pub fn new(comment: Option<&str>, header: &str) -> Self {
        let mut text = String::new();
        if let Some(c) = comment {
            text.push_str("# ");
            text.push_str(c);
            text.push('\n');
        }
        text.push_str(header);
        text.push('\n');
        CsvDoc { text }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for f in fields {
            if !first {
                self.text.push(',');
            }
            self.text.push_str(f.as_ref());
            first = false;
        }
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        write_file(path, &self.text)
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -6.0 / std::f64::consts::PI.powi(2), 1e300, 0.0] {
            let s = fmt_f64(v);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17, "{s}");
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
    }

    #[test]
    fn json_uses_precise_floats() {
        let v = serde_json::json!({ "a": 0.5, "b": [1, 2], "c": f64::NAN });
        let s = to_json_string(&v);
        assert!(s.contains("5.0000000000000000e-1"));
        assert!(s.contains("null"));
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["a"].as_f64(), Some(0.5));
    }

    #[test]
    fn csv_layout() {
        let mut doc = CsvDoc::new(Some("tool 1"), "x,y");
        doc.row(["1", "2"]);
        assert_eq!(doc.as_str(), "# tool 1\nx,y\n1,2\n");
    }
}
