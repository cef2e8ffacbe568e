//! CSV and ARFF ingestion.
//!
//! Files are parsed eagerly so that column types can be inferred (CSV) and
//! every row is validated before the first instance is served. Numbers are
//! parsed with Rust's locale-independent float parser. CSV lines starting with `#`
//! are comments.

use std::collections::HashMap;
use std::path::Path;
use std::str::FromStr;

use super::{Feature, FeatureKind, Instance, Stream, StreamSchema};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    Csv,
    Arff,
}

impl DataFormat {
    /// Guesses the format from the file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(DataFormat::Csv),
            "arff" => Some(DataFormat::Arff),
            _ => None,
        }
    }
}

impl FromStr for DataFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(DataFormat::Csv),
            "arff" => Ok(DataFormat::Arff),
            _ => Err(Error::config("format", format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Class column/attribute. Defaults to `class` (any case); ARFF falls
    /// back to the last attribute.
    pub class_column: Option<String>,
}

/// Instances read from a file, served in file order exactly once.
#[derive(Debug, Clone)]
pub struct FileStream {
    schema: StreamSchema,
    instances: Vec<Instance>,
    next: usize,
}

impl FileStream {
    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }
}

impl Stream for FileStream {
    fn schema(&self) -> &StreamSchema {
        &self.schema
    }

    fn next_instance(&mut self) -> Result<Option<Instance>> {
        let out = self.instances.get(self.next).cloned();
        if out.is_some() {
            self.next += 1;
        }
        Ok(out)
    }
}

pub fn load_dataset(path: impl AsRef<Path>, format: DataFormat, options: &LoadOptions) -> Result<FileStream> {
    let path = path.as_ref();
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("dataset")
        .to_string();
    let text = std::fs::read_to_string(path)?;
    match format {
        DataFormat::Csv => parse_csv(&name, &text, options),
        DataFormat::Arff => parse_arff(&name, &text, options),
    }
}

fn is_class_name(candidate: &str, options: &LoadOptions) -> bool {
    match &options.class_column {
        Some(c) => candidate == c,
        None => candidate.eq_ignore_ascii_case("class"),
    }
}

fn parse_number(raw: &str, line: usize, column: &str) -> Result<f64> {
    let v: f64 = raw
        .parse()
        .map_err(|_| Error::row(line, format!("`{raw}` is not a number in column `{column}`")))?;
    if !v.is_finite() {
        return Err(Error::row(line, format!("non-finite value in column `{column}`")));
    }
    Ok(v)
}

/// Value index by first appearance.
#[derive(Default)]
struct Dictionary {
    values: Vec<String>,
    index: HashMap<String, usize>,
}

impl Dictionary {
    fn intern(&mut self, v: &str) -> usize {
        if let Some(&i) = self.index.get(v) {
            return i;
        }
        let i = self.values.len();
        self.values.push(v.to_string());
        self.index.insert(v.to_string(), i);
        i
    }
}

pub(crate) fn parse_csv(name: &str, text: &str, options: &LoadOptions) -> Result<FileStream> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Schema(format!("cannot read CSV header: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    let class_col = header
        .iter()
        .position(|h| is_class_name(h, options))
        .ok_or_else(|| {
            Error::Schema(format!(
                "no class column `{}` in header",
                options.class_column.as_deref().unwrap_or("class")
            ))
        })?;

    let mut rows: Vec<(usize, Vec<String>)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            Error::row(line, e.to_string())
        })?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        if record.len() != header.len() {
            return Err(Error::row(
                line,
                format!("expected {} fields, found {}", header.len(), record.len()),
            ));
        }
        if let Some(col) = record.iter().position(str::is_empty) {
            return Err(Error::row(line, format!("empty value in column `{}`", header[col])));
        }
        rows.push((line, record.iter().map(str::to_string).collect()));
    }

    let feature_cols: Vec<usize> = (0..header.len()).filter(|&c| c != class_col).collect();
    let numeric: Vec<bool> = feature_cols
        .iter()
        .map(|&c| rows.iter().all(|(_, r)| r[c].parse::<f64>().map(f64::is_finite).unwrap_or(false)))
        .collect();
    let mut dictionaries: Vec<Dictionary> = feature_cols.iter().map(|_| Dictionary::default()).collect();
    let mut classes = Dictionary::default();

    let mut instances = Vec::with_capacity(rows.len());
    for (line, row) in &rows {
        let mut x = Vec::with_capacity(feature_cols.len());
        for (j, &c) in feature_cols.iter().enumerate() {
            if numeric[j] {
                x.push(parse_number(&row[c], *line, &header[c])?);
            } else {
                x.push(dictionaries[j].intern(&row[c]) as f64);
            }
        }
        instances.push(Instance::labeled(x, classes.intern(&row[class_col])));
    }

    let features = feature_cols
        .iter()
        .zip(numeric)
        .zip(dictionaries)
        .map(|((&c, is_num), dict)| {
            if is_num {
                Feature::numeric(header[c].clone())
            } else {
                Feature::nominal(header[c].clone(), dict.values)
            }
        })
        .collect();
    let schema = StreamSchema::new(name, features, classes.values)?;
    Ok(FileStream {
        schema,
        instances,
        next: 0,
    })
}

fn unquote(s: &str) -> &str {
    let s = s.trim();
    if s.len() >= 2 && ((s.starts_with('\'') && s.ends_with('\'')) || (s.starts_with('"') && s.ends_with('"'))) {
        &s[1..s.len() - 1]
    } else {
        s
    }
}

/// Splits an `@attribute` declaration body into (name, type).
fn split_attribute(body: &str) -> Option<(&str, &str)> {
    let body = body.trim();
    let quote = body.chars().next()?;
    if quote == '\'' || quote == '"' {
        let end = body[1..].find(quote)? + 1;
        Some((&body[1..end], body[end + 1..].trim()))
    } else {
        let end = body.find(char::is_whitespace)?;
        Some((&body[..end], body[end..].trim()))
    }
}

struct ArffAttribute {
    name: String,
    kind: FeatureKind,
    lookup: HashMap<String, usize>,
}

pub(crate) fn parse_arff(name: &str, text: &str, options: &LoadOptions) -> Result<FileStream> {
    let mut relation = name.to_string();
    let mut attributes: Vec<ArffAttribute> = Vec::new();
    let mut lines = text.lines().enumerate();
    let mut in_data = false;
    for (i, raw) in lines.by_ref() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let lower = line.to_ascii_lowercase();
        if lower.starts_with("@relation") {
            relation = unquote(&line["@relation".len()..]).to_string();
        } else if lower.starts_with("@attribute") {
            let (attr_name, ty) = split_attribute(&line["@attribute".len()..])
                .ok_or_else(|| Error::row(i + 1, "malformed @attribute declaration"))?;
            let kind = if ty.starts_with('{') {
                let inner = ty
                    .strip_prefix('{')
                    .and_then(|t| t.strip_suffix('}'))
                    .ok_or_else(|| Error::row(i + 1, "unterminated nominal value set"))?;
                let values: Vec<String> = inner
                    .split(',')
                    .map(|v| unquote(v).to_string())
                    .filter(|v| !v.is_empty())
                    .collect();
                FeatureKind::Nominal(values)
            } else {
                match ty.to_ascii_lowercase().as_str() {
                    "numeric" | "real" | "integer" => FeatureKind::Numeric,
                    other => {
                        return Err(Error::row(i + 1, format!("unsupported attribute type `{other}`")));
                    }
                }
            };
            let lookup = match &kind {
                FeatureKind::Nominal(values) => values.iter().enumerate().map(|(j, v)| (v.clone(), j)).collect(),
                FeatureKind::Numeric => HashMap::new(),
            };
            attributes.push(ArffAttribute {
                name: attr_name.to_string(),
                kind,
                lookup,
            });
        } else if lower.starts_with("@data") {
            in_data = true;
            break;
        } else {
            return Err(Error::row(i + 1, format!("unexpected line before @data: `{line}`")));
        }
    }
    if !in_data {
        return Err(Error::Schema("missing @data section".into()));
    }
    if attributes.is_empty() {
        return Err(Error::Schema("no attributes declared".into()));
    }

    let class_idx = match &options.class_column {
        Some(c) => attributes
            .iter()
            .position(|a| &a.name == c)
            .ok_or_else(|| Error::Schema(format!("no class attribute `{c}`")))?,
        None => attributes
            .iter()
            .position(|a| a.name.eq_ignore_ascii_case("class"))
            .unwrap_or(attributes.len() - 1),
    };
    let class_labels = match &attributes[class_idx].kind {
        FeatureKind::Nominal(values) => values.clone(),
        FeatureKind::Numeric => {
            return Err(Error::Schema(format!(
                "class attribute `{}` must be nominal",
                attributes[class_idx].name
            )))
        }
    };

    let mut instances = Vec::new();
    for (i, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let lineno = i + 1;
        if line.starts_with('{') {
            return Err(Error::row(lineno, "sparse ARFF rows are not supported"));
        }
        let fields: Vec<&str> = line.split(',').map(unquote).collect();
        if fields.len() != attributes.len() {
            return Err(Error::row(
                lineno,
                format!("expected {} values, found {}", attributes.len(), fields.len()),
            ));
        }
        let mut x = Vec::with_capacity(attributes.len() - 1);
        let mut y = 0;
        for (j, (field, attr)) in fields.iter().zip(&attributes).enumerate() {
            if *field == "?" {
                return Err(Error::row(lineno, format!("missing value for `{}`", attr.name)));
            }
            let value = match &attr.kind {
                FeatureKind::Numeric => parse_number(field, lineno, &attr.name)?,
                FeatureKind::Nominal(_) => *attr.lookup.get(*field).ok_or_else(|| {
                    Error::row(lineno, format!("unknown value `{field}` for nominal attribute `{}`", attr.name))
                })? as f64,
            };
            if j == class_idx {
                y = value as usize;
            } else {
                x.push(value);
            }
        }
        instances.push(Instance::labeled(x, y));
    }

    let features = attributes
        .into_iter()
        .enumerate()
        .filter(|(j, _)| *j != class_idx)
        .map(|(_, a)| Feature {
            name: a.name,
            kind: a.kind,
        })
        .collect();
    let schema = StreamSchema::new(relation, features, class_labels)?;
    Ok(FileStream {
        schema,
        instances,
        next: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn drain(mut s: FileStream) -> Vec<Instance> {
        let mut out = Vec::new();
        while let Some(i) = s.next_instance().unwrap() {
            out.push(i);
        }
        out
    }

    #[test]
    fn small_csv() {
        let s = parse_csv("t", "a,b,class\n1.5,2,yes\n-3,4e2,no\n0,0,yes\n", &LoadOptions::default()).unwrap();
        assert_eq!(s.schema().n_features(), 2);
        assert_eq!(s.schema().n_classes(), 2);
        let rows = drain(s);
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1], Instance::labeled(vec![-3.0, 400.0], 1));
    }

    #[test]
    fn csv_nominal_column_and_custom_class() {
        let opts = LoadOptions {
            class_column: Some("target".into()),
        };
        let s = parse_csv("t", "color,target,w\nred,a,1\nblue,b,2\n", &opts).unwrap();
        assert_eq!(s.schema().features()[0].kind, FeatureKind::nominal(["red", "blue"]));
        assert!(s.schema().features()[1].kind.is_numeric());
    }

    #[test]
    fn csv_comment_lines_are_skipped() {
        let s = parse_csv("t", "# config_hash=abc\na,class\n1,x\n# note\n2,y\n", &LoadOptions::default()).unwrap();
        assert_eq!(drain(s).len(), 2);
    }

    #[test]
    fn csv_missing_class_column() {
        let err = parse_csv("t", "a,b\n1,2\n", &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
    }

    #[test]
    fn csv_ragged_row_names_line() {
        match parse_csv("t", "a,class\n1,x\n2\n3,y\n", &LoadOptions::default()) {
            Err(Error::Row { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    const ARFF: &str = "% comment\n@relation toy\n@attribute 'f one' numeric\n@attribute letter {a,b}\n@attribute class {pos,neg}\n@data\n1.0,a,pos\n2.0,b,neg\n";

    #[test]
    fn arff_basic() {
        let s = parse_arff("t", ARFF, &LoadOptions::default()).unwrap();
        assert_eq!(s.schema().name(), "toy");
        assert_eq!(s.schema().features()[0].name, "f one");
        assert_eq!(drain(s), vec![Instance::labeled(vec![1.0, 0.0], 0), Instance::labeled(vec![2.0, 1.0], 1)]);
    }

    #[test]
    fn arff_unknown_nominal_value_reports_line() {
        let text = format!("{ARFF}3.0,c,pos\n");
        match parse_arff("t", &text, &LoadOptions::default()) {
            Err(Error::Row { line, reason }) => {
                assert_eq!(line, 9);
                assert!(reason.contains("`c`"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn arff_numeric_class_is_schema_error() {
        let text = "@relation r\n@attribute a {x,y}\n@attribute class numeric\n@data\nx,1\n";
        assert!(matches!(parse_arff("t", text, &LoadOptions::default()), Err(Error::Schema(_))));
    }

    #[test]
    fn arff_missing_value_rejected() {
        let text = format!("{ARFF}?,a,pos\n");
        assert!(matches!(parse_arff("t", &text, &LoadOptions::default()), Err(Error::Row { .. })));
    }
}
