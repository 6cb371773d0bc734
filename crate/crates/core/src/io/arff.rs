//! Dense ARFF reader paired with a Mulan-style XML label list.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use ndarray::Array2;
use quick_xml::events::Event;
use quick_xml::Reader;

use crate::dataset::MultiLabelDataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum AttributeKind {
    Numeric,
    Nominal(Vec<String>),
}

#[derive(Debug, Clone)]
struct Attribute {
    name: String,
    kind: AttributeKind,
}

/// Loads a dense ARFF file and splits its columns into features and labels
/// using the label names listed in `label_spec_path`.
pub fn load_mulan_arff(
    data_path: impl AsRef<Path>,
    label_spec_path: impl AsRef<Path>,
) -> Result<MultiLabelDataset> {
    let label_spec_path = label_spec_path.as_ref();
    let xml = fs::read_to_string(label_spec_path).map_err(|e| Error::io(label_spec_path, e))?;
    let label_names = parse_label_spec(&xml).map_err(|msg| Error::parse(label_spec_path, 0, msg))?;
    let data_path = data_path.as_ref();
    let text = fs::read_to_string(data_path).map_err(|e| Error::io(data_path, e))?;
    parse_arff(&text, &label_names, data_path)
}

/// Extracts `name` attributes of every `<label>` element, in document order.
pub fn parse_label_spec(xml: &str) -> std::result::Result<Vec<String>, String> {
    let mut reader = Reader::from_str(xml);
    let mut names = Vec::new();
    loop {
        match reader.read_event() {
            Ok(Event::Start(e)) | Ok(Event::Empty(e)) if e.local_name().as_ref() == b"label" => {
                let attr = e
                    .try_get_attribute("name")
                    .map_err(|err| err.to_string())?
                    .ok_or_else(|| "label element without a name attribute".to_string())?;
                let value = attr.unescape_value().map_err(|err| err.to_string())?;
                names.push(value.into_owned());
            }
            Ok(Event::Eof) => break,
            Ok(_) => {}
            Err(e) => {
                return Err(format!(
                    "malformed XML at byte {}: {e}",
                    reader.buffer_position()
                ))
            }
        }
    }
    if names.is_empty() {
        return Err("label specification names no labels".into());
    }
    Ok(names)
}

pub(crate) fn parse_arff(
    text: &str,
    label_names: &[String],
    path: &Path,
) -> Result<MultiLabelDataset> {
    let mut attributes: Vec<Attribute> = Vec::new();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut in_data = false;

    for (lineno, raw) in lines.by_ref() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let lower = line.to_ascii_lowercase();
        if lower.starts_with("@relation") {
            continue;
        }
        if lower.starts_with("@attribute") {
            let attr = parse_attribute(&line["@attribute".len()..])
                .map_err(|msg| Error::parse(path, lineno, msg))?;
            attributes.push(attr);
            continue;
        }
        if lower.starts_with("@data") {
            in_data = true;
            break;
        }
        return Err(Error::parse(
            path,
            lineno,
            format!("unexpected header line '{line}'"),
        ));
    }
    if !in_data {
        return Err(Error::parse(path, 0, "missing @data section"));
    }
    if attributes.is_empty() {
        return Err(Error::parse(path, 0, "no attributes declared"));
    }

    let index_of: HashMap<&str, usize> = attributes
        .iter()
        .enumerate()
        .map(|(i, a)| (a.name.as_str(), i))
        .collect();
    let mut label_columns = Vec::with_capacity(label_names.len());
    for name in label_names {
        match index_of.get(name.as_str()) {
            Some(&i) => label_columns.push(i),
            None => {
                return Err(Error::parse(
                    path,
                    0,
                    format!("label '{name}' is not an attribute of the data file"),
                ))
            }
        }
    }
    let is_label: Vec<bool> = (0..attributes.len())
        .map(|i| label_columns.contains(&i))
        .collect();
    let feature_columns: Vec<usize> = (0..attributes.len()).filter(|&i| !is_label[i]).collect();

    let mut feature_values: Vec<f64> = Vec::new();
    let mut label_values: Vec<u8> = Vec::new();
    let mut rows = 0usize;

    for (lineno, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if line.starts_with('{') {
            return Err(Error::parse(path, lineno, "sparse ARFF rows are not supported"));
        }
        let cells = split_row(line).map_err(|msg| Error::parse(path, lineno, msg))?;
        if cells.len() != attributes.len() {
            return Err(Error::parse(
                path,
                lineno,
                format!(
                    "expected {} values, found {}",
                    attributes.len(),
                    cells.len()
                ),
            ));
        }
        for &j in &feature_columns {
            let v = feature_value(&attributes[j], &cells[j])
                .map_err(|msg| Error::parse(path, lineno, msg))?;
            feature_values.push(v);
        }
        for &j in &label_columns {
            let v = label_value(&cells[j]).ok_or_else(|| {
                Error::parse(
                    path,
                    lineno,
                    format!(
                        "non-binary value '{}' in label column '{}'",
                        cells[j], attributes[j].name
                    ),
                )
            })?;
            label_values.push(v);
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::parse(path, 0, "no data rows"));
    }

    let features = Array2::from_shape_vec((rows, feature_columns.len()), feature_values)
        .expect("row-major feature buffer");
    let labels = Array2::from_shape_vec((rows, label_columns.len()), label_values)
        .expect("row-major label buffer");
    let feature_names = feature_columns
        .iter()
        .map(|&j| attributes[j].name.clone())
        .collect();
    MultiLabelDataset::new(features, labels, feature_names, label_names.to_vec())
}

fn parse_attribute(rest: &str) -> std::result::Result<Attribute, String> {
    let rest = rest.trim();
    let (name, tail) = take_token(rest)?;
    let tail = tail.trim();
    if tail.is_empty() {
        return Err(format!("attribute '{name}' has no type"));
    }
    let kind = if let Some(body) = tail.strip_prefix('{') {
        let body = body
            .rfind('}')
            .map(|end| &body[..end])
            .ok_or_else(|| format!("unterminated nominal list for '{name}'"))?;
        let values = split_row(body)?;
        AttributeKind::Nominal(values)
    } else {
        match tail.to_ascii_lowercase().as_str() {
            "numeric" | "real" | "integer" => AttributeKind::Numeric,
            other => return Err(format!("unsupported attribute type '{other}' for '{name}'")),
        }
    };
    Ok(Attribute { name, kind })
}

/// Reads one possibly quoted token and returns it with the remaining input.
fn take_token(s: &str) -> std::result::Result<(String, &str), String> {
    let mut chars = s.char_indices();
    match chars.next() {
        Some((_, q)) if q == '\'' || q == '"' => {
            let mut out = String::new();
            let mut escaped = false;
            for (i, c) in chars {
                if escaped {
                    out.push(c);
                    escaped = false;
                } else if c == '\\' {
                    escaped = true;
                } else if c == q {
                    return Ok((out, &s[i + c.len_utf8()..]));
                } else {
                    out.push(c);
                }
            }
            Err("unterminated quoted name".into())
        }
        Some(_) => {
            let end = s.find(char::is_whitespace).unwrap_or(s.len());
            Ok((s[..end].to_string(), &s[end..]))
        }
        None => Err("missing attribute name".into()),
    }
}

/// Splits a comma separated row honoring single and double quotes.
fn split_row(line: &str) -> std::result::Result<Vec<String>, String> {
    let mut cells = Vec::new();
    let mut cur = String::new();
    let mut quote: Option<char> = None;
    let mut escaped = false;
    let mut was_quoted = false;
    for c in line.chars() {
        if escaped {
            cur.push(c);
            escaped = false;
            continue;
        }
        match quote {
            Some(q) => {
                if c == '\\' {
                    escaped = true;
                } else if c == q {
                    quote = None;
                } else {
                    cur.push(c);
                }
            }
            None => match c {
                '\'' | '"' => {
                    quote = Some(c);
                    was_quoted = true;
                }
                ',' => {
                    cells.push(finish_cell(&cur, was_quoted));
                    cur.clear();
                    was_quoted = false;
                }
                _ => cur.push(c),
            },
        }
    }
    if quote.is_some() {
        return Err("unterminated quote".into());
    }
    cells.push(finish_cell(&cur, was_quoted));
    Ok(cells)
}

fn finish_cell(cur: &str, quoted: bool) -> String {
    if quoted {
        cur.to_string()
    } else {
        cur.trim().to_string()
    }
}

fn feature_value(attr: &Attribute, cell: &str) -> std::result::Result<f64, String> {
    if cell == "?" {
        return Ok(f64::NAN);
    }
    match &attr.kind {
        AttributeKind::Numeric => cell
            .parse::<f64>()
            .map_err(|_| format!("non-numeric value '{cell}' for '{}'", attr.name)),
        AttributeKind::Nominal(values) => values
            .iter()
            .position(|v| v == cell)
            .map(|p| p as f64)
            .ok_or_else(|| format!("value '{cell}' not declared for '{}'", attr.name)),
    }
}

fn label_value(cell: &str) -> Option<u8> {
    match cell {
        "1" => Some(1),
        "0" => Some(0),
        other => match other.parse::<f64>() {
            Ok(1.0) => Some(1),
            Ok(0.0) => Some(0),
            _ => None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const XML: &str = r#"<?xml version="1.0" encoding="utf-8"?>
<labels xmlns="http://mulan.sourceforge.net/labels">
<label name="happy"></label>
<label name="sad &amp; blue"/>
</labels>"#;

    const ARFF: &str = "% comment\r\n@relation 'toy'\r\n\
@attribute f1 numeric\r\n\
@attribute 'colour' {red,green,blue}\r\n\
@attribute happy {0,1}\r\n\
@attribute f3 real\r\n\
@attribute 'sad & blue' {0,1}\r\n\
@data\r\n\
0.5,green,1,2,0\r\n\
?,blue,0,-1.5e1,1\r\n";

    fn names() -> Vec<String> {
        parse_label_spec(XML).unwrap()
    }

    #[test]
    fn label_spec_parses_names() {
        assert_eq!(names(), vec!["happy".to_string(), "sad & blue".to_string()]);
        assert!(parse_label_spec("<labels></labels>").is_err());
    }

    #[test]
    fn splits_features_and_labels() {
        let ds = parse_arff(ARFF, &names(), Path::new("toy.arff")).unwrap();
        assert_eq!(ds.instance_count(), 2);
        assert_eq!(ds.feature_count(), 3);
        assert_eq!(ds.label_count(), 2);
        assert_eq!(ds.feature_names(), &["f1", "colour", "f3"]);
        assert_eq!(ds.features()[[0, 1]], 1.0);
        assert_eq!(ds.features()[[1, 1]], 2.0);
        assert_eq!(ds.features()[[1, 2]], -15.0);
        assert!(ds.features()[[1, 0]].is_nan());
        assert_eq!(ds.labels()[[0, 0]], 1);
        assert_eq!(ds.labels()[[1, 1]], 1);
    }

    #[test]
    fn non_binary_label_reports_line() {
        let bad = ARFF.replace("0.5,green,1,2,0", "0.5,green,2,2,0");
        let err = parse_arff(&bad, &names(), Path::new("toy.arff")).unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 9);
                assert!(message.contains("non-binary"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_label_attribute() {
        let err = parse_arff(ARFF, &["angry".to_string()], Path::new("t.arff")).unwrap_err();
        assert!(err.to_string().contains("angry"));
    }

    #[test]
    fn malformed_header() {
        let bad = ARFF.replace("@attribute f3 real", "@attribute f3");
        let err = parse_arff(&bad, &names(), Path::new("t.arff")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 6, .. }), "{err}");
        let bad = ARFF.replace("@attribute f3 real", "@attribute f3 date");
        assert!(parse_arff(&bad, &names(), Path::new("t.arff")).is_err());
    }

    #[test]
    fn ragged_row() {
        let bad = ARFF.replace("?,blue,0,-1.5e1,1", "?,blue,0,1");
        let err = parse_arff(&bad, &names(), Path::new("t.arff")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 10, .. }), "{err}");
    }
}
