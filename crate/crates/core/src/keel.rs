//! KEEL `.dat` and CSV reading/writing, plus the two-class reduction.
//!
//! A KEEL file is a header (`@relation`, `@attribute`, optional `@inputs` /
//! `@outputs`) followed by `@data` and one comma-separated row per line.
//! Class values stay as raw text until a [`TwoClassMapping`] turns them into
//! [`Label`]s.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Label, Matrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum AttributeKind {
    Real,
    Integer,
    Nominal(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct KeelAttribute {
    pub name: String,
    pub kind: AttributeKind,
    /// Declared `[lo, hi]`, parsed but never enforced.
    pub range: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KeelHeader {
    pub relation_name: String,
    pub attributes: Vec<KeelAttribute>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl KeelHeader {
    fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }
}

/// A parsed file before class values are mapped to labels.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDataset {
    pub header: KeelHeader,
    pub features: Matrix,
    pub class_values: Vec<String>,
}

impl RawDataset {
    pub fn n_rows(&self) -> usize {
        self.class_values.len()
    }

    /// Distinct class values with their row counts, sorted by value.
    pub fn class_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for v in &self.class_values {
            *counts.entry(v.clone()).or_insert(0) += 1;
        }
        counts
    }

    pub fn reduce_two_class(&self, mapping: &TwoClassMapping) -> Result<Dataset> {
        reduce_two_class(self, mapping)
    }
}

/// Which raw class values form the positive (minority) and negative classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoClassMapping {
    pub positive_values: BTreeSet<String>,
    pub negative_values: BTreeSet<String>,
}

impl TwoClassMapping {
    pub fn new<P, N, S>(positive: P, negative: N) -> Result<Self>
    where
        P: IntoIterator<Item = S>,
        N: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let positive_values: BTreeSet<String> = positive.into_iter().map(Into::into).collect();
        let negative_values: BTreeSet<String> = negative.into_iter().map(Into::into).collect();
        if let Some(v) = positive_values.intersection(&negative_values).next() {
            return Err(Error::InvalidMapping(format!(
                "value '{v}' is both positive and negative"
            )));
        }
        if positive_values.is_empty() {
            return Err(Error::InvalidMapping("no positive values".into()));
        }
        Ok(Self {
            positive_values,
            negative_values,
        })
    }

    /// `positive` against every other value present in `raw`.
    pub fn one_vs_rest<P, S>(raw: &RawDataset, positive: P) -> Result<Self>
    where
        P: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let positive: BTreeSet<String> = positive.into_iter().map(Into::into).collect();
        let negative: Vec<String> = raw
            .class_counts()
            .into_keys()
            .filter(|v| !positive.contains(v))
            .collect();
        Self::new(positive, negative)
    }

    /// Mapping for binary files without an explicit mapping.
    ///
    /// `positive`/`negative` tokens map to themselves. Otherwise the file must
    /// have exactly two class values and the smaller one becomes positive; on a
    /// size tie the lexicographically smaller value wins.
    pub fn infer(raw: &RawDataset) -> Result<Self> {
        let counts = raw.class_counts();
        let keys: Vec<&String> = counts.keys().collect();
        let is_token = |s: &str, t: &str| s.eq_ignore_ascii_case(t);
        if !keys.is_empty()
            && keys
                .iter()
                .all(|k| is_token(k, "positive") || is_token(k, "negative"))
        {
            let (pos, neg): (Vec<&String>, Vec<&String>) =
                keys.iter().partition(|k| is_token(k, "positive"));
            return Self::new(
                pos.into_iter().cloned().collect::<Vec<_>>(),
                neg.into_iter().cloned().collect::<Vec<_>>(),
            );
        }
        match keys.as_slice() {
            [a, b] => {
                let (ca, cb) = (counts[*a], counts[*b]);
                // BTreeMap order: a < b lexicographically.
                if cb < ca {
                    Self::new([(*b).clone()], [(*a).clone()])
                } else {
                    Self::new([(*a).clone()], [(*b).clone()])
                }
            }
            _ => Err(Error::InvalidMapping(format!(
                "{} class values present ({}); an explicit positive class is required",
                keys.len(),
                keys.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
            ))),
        }
    }

    fn label_of(&self, value: &str) -> Option<Label> {
        if self.positive_values.contains(value) {
            Some(Label::Positive)
        } else if self.negative_values.contains(value) {
            Some(Label::Negative)
        } else {
            None
        }
    }
}

/// Maps raw class values to labels; requires both classes in the result.
pub fn reduce_two_class(raw: &RawDataset, mapping: &TwoClassMapping) -> Result<Dataset> {
    let mut unmapped = BTreeSet::new();
    let labels: Vec<Label> = raw
        .class_values
        .iter()
        .filter_map(|v| {
            let l = mapping.label_of(v);
            if l.is_none() {
                unmapped.insert(v.clone());
            }
            l
        })
        .collect();
    if !unmapped.is_empty() {
        return Err(Error::UnmappedClass(unmapped.into_iter().collect()));
    }
    let d = Dataset::new(raw.features.clone(), labels, raw.header.inputs.clone())?;
    if raw.n_rows() > 0 {
        d.require_both_classes()?;
    }
    Ok(d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataFormat {
    Keel,
    Csv,
}

impl DataFormat {
    /// `.csv` is CSV, anything else is KEEL.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => DataFormat::Csv,
            _ => DataFormat::Keel,
        }
    }
}

impl FromStr for DataFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "keel" | "dat" => Ok(DataFormat::Keel),
            "csv" => Ok(DataFormat::Csv),
            other => Err(Error::Config(format!(
                "unknown format '{other}', expected keel or csv"
            ))),
        }
    }
}

pub fn read_raw(path: &Path, format: DataFormat) -> Result<RawDataset> {
    let file = File::open(path)?;
    match format {
        DataFormat::Keel => parse_keel(BufReader::new(file)),
        DataFormat::Csv => parse_csv(file),
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn strip_quotes(s: &str) -> &str {
    let s = s.trim();
    for q in ['\'', '"'] {
        if s.len() >= 2 && s.starts_with(q) && s.ends_with(q) {
            return &s[1..s.len() - 1];
        }
    }
    s
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(|t| strip_quotes(t).to_string())
        .filter(|t| !t.is_empty())
        .collect()
}

fn parse_attribute(rest: &str, line: usize) -> Result<KeelAttribute> {
    let rest = rest.trim();
    let (name, tail) = if let Some(q) = rest.chars().next().filter(|c| *c == '\'' || *c == '"') {
        let end = rest[1..]
            .find(q)
            .ok_or_else(|| parse_err(line, "unterminated quoted attribute name"))?;
        (rest[1..1 + end].to_string(), rest[end + 2..].trim())
    } else {
        let end = rest
            .find(|c: char| c.is_whitespace() || c == '{')
            .ok_or_else(|| parse_err(line, "attribute declaration without a type"))?;
        (rest[..end].to_string(), rest[end..].trim())
    };
    if let Some(body) = tail.strip_prefix('{') {
        let body = body
            .strip_suffix('}')
            .or_else(|| body.trim_end().strip_suffix('}'))
            .ok_or_else(|| parse_err(line, "unterminated nominal value set"))?;
        return Ok(KeelAttribute {
            name,
            kind: AttributeKind::Nominal(split_list(body)),
            range: None,
        });
    }
    let (ty, range_part) = match tail.find('[') {
        Some(p) => (tail[..p].trim(), Some(&tail[p..])),
        None => (tail.trim(), None),
    };
    let kind = match ty.to_ascii_lowercase().as_str() {
        "real" | "numeric" => AttributeKind::Real,
        "integer" => AttributeKind::Integer,
        other => return Err(parse_err(line, format!("unknown attribute type '{other}'"))),
    };
    let range = match range_part {
        None => None,
        Some(r) => {
            let inner = r
                .trim()
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| parse_err(line, "malformed range"))?;
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            match parts.as_slice() {
                [lo, hi] => Some((
                    lo.parse()
                        .map_err(|_| parse_err(line, format!("bad range bound '{lo}'")))?,
                    hi.parse()
                        .map_err(|_| parse_err(line, format!("bad range bound '{hi}'")))?,
                )),
                _ => return Err(parse_err(line, "range must have two bounds")),
            }
        }
    };
    Ok(KeelAttribute { name, kind, range })
}

/// Parses a KEEL `.dat` stream.
pub fn parse_keel<R: BufRead>(reader: R) -> Result<RawDataset> {
    let mut relation_name = String::new();
    let mut attributes: Vec<KeelAttribute> = Vec::new();
    let mut inputs: Option<Vec<String>> = None;
    let mut outputs: Option<Vec<String>> = None;
    let mut in_data = false;
    let mut header: Option<KeelHeader> = None;
    let mut input_idx: Vec<usize> = Vec::new();
    let mut output_idx = 0usize;
    let mut data: Vec<f64> = Vec::new();
    let mut class_values: Vec<String> = Vec::new();
    let mut last_line = 0usize;

    for (n, line) in reader.lines().enumerate() {
        let lineno = n + 1;
        last_line = lineno;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        if !in_data {
            let (keyword, rest) = match trimmed.find(char::is_whitespace) {
                Some(p) => (&trimmed[..p], trimmed[p..].trim()),
                None => (trimmed, ""),
            };
            match keyword.to_ascii_lowercase().as_str() {
                "@relation" => relation_name = strip_quotes(rest).to_string(),
                "@attribute" => attributes.push(parse_attribute(rest, lineno)?),
                "@inputs" => inputs = Some(split_list(rest)),
                "@outputs" | "@output" => outputs = Some(split_list(rest)),
                "@data" => {
                    let h = finish_header(relation_name.clone(), &attributes, &inputs, &outputs, lineno)?;
                    input_idx = h
                        .inputs
                        .iter()
                        .map(|name| h.attribute_index(name).unwrap())
                        .collect();
                    output_idx = h.attribute_index(&h.outputs[0]).unwrap();
                    header = Some(h);
                    in_data = true;
                }
                other => {
                    return Err(parse_err(lineno, format!("unexpected header line '{other}'")))
                }
            }
            continue;
        }
        let h = header.as_ref().unwrap();
        let row_index = class_values.len();
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if fields.len() != h.attributes.len() {
            return Err(parse_err(
                lineno,
                format!(
                    "data row {row_index} has {} values, expected {}",
                    fields.len(),
                    h.attributes.len()
                ),
            ));
        }
        for &j in &input_idx {
            data.push(parse_value(&h.attributes[j], fields[j], lineno, row_index)?);
        }
        let class_attr = &h.attributes[output_idx];
        let class = strip_quotes(fields[output_idx]).to_string();
        match &class_attr.kind {
            AttributeKind::Nominal(values) if !values.contains(&class) => {
                return Err(parse_err(
                    lineno,
                    format!(
                        "unknown nominal value '{class}' for attribute '{}' in data row {row_index}",
                        class_attr.name
                    ),
                ));
            }
            _ => {}
        }
        class_values.push(class);
    }

    let header = header.ok_or_else(|| parse_err(last_line, "missing @data section"))?;
    let features = Matrix::from_flat(data, header.inputs.len())?;
    Ok(RawDataset {
        header,
        features,
        class_values,
    })
}

pub fn parse_keel_str(text: &str) -> Result<RawDataset> {
    parse_keel(text.as_bytes())
}

fn finish_header(
    relation_name: String,
    attributes: &[KeelAttribute],
    inputs: &Option<Vec<String>>,
    outputs: &Option<Vec<String>>,
    line: usize,
) -> Result<KeelHeader> {
    if attributes.is_empty() {
        return Err(parse_err(line, "no @attribute declarations before @data"));
    }
    let outputs = match outputs {
        Some(o) => o.clone(),
        None => match inputs {
            Some(i) => attributes
                .iter()
                .filter(|a| !i.contains(&a.name))
                .map(|a| a.name.clone())
                .collect(),
            None => vec![attributes.last().unwrap().name.clone()],
        },
    };
    if outputs.len() != 1 {
        return Err(parse_err(
            line,
            format!("exactly one output attribute required, found {}", outputs.len()),
        ));
    }
    let inputs = match inputs {
        Some(i) => i.clone(),
        None => attributes
            .iter()
            .filter(|a| a.name != outputs[0])
            .map(|a| a.name.clone())
            .collect(),
    };
    for name in inputs.iter().chain(&outputs) {
        if !attributes.iter().any(|a| &a.name == name) {
            return Err(parse_err(line, format!("undeclared attribute '{name}'")));
        }
    }
    if inputs.contains(&outputs[0]) {
        return Err(parse_err(line, "output attribute also listed as input"));
    }
    Ok(KeelHeader {
        relation_name,
        attributes: attributes.to_vec(),
        inputs,
        outputs,
    })
}

fn parse_value(attr: &KeelAttribute, field: &str, line: usize, row: usize) -> Result<f64> {
    let field = strip_quotes(field);
    if field == "?" || field.is_empty() {
        return Err(parse_err(
            line,
            format!("missing value for '{}' in data row {row}", attr.name),
        ));
    }
    match &attr.kind {
        AttributeKind::Nominal(values) => values
            .iter()
            .position(|v| v == field)
            .map(|p| p as f64)
            .ok_or_else(|| {
                parse_err(
                    line,
                    format!(
                        "unknown nominal value '{field}' for attribute '{}' in data row {row}",
                        attr.name
                    ),
                )
            }),
        _ => field
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| {
                parse_err(
                    line,
                    format!("bad numeric value '{field}' for '{}' in data row {row}", attr.name),
                )
            }),
    }
}

/// Parses a CSV stream with a header row; the class is the last column.
pub fn parse_csv<R: Read>(reader: R) -> Result<RawDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let names: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if names.len() < 2 {
        return Err(parse_err(1, "CSV needs at least one feature column and a class column"));
    }
    let n_inputs = names.len() - 1;
    let mut data = Vec::new();
    let mut class_values = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let record = record?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(row + 2);
        if record.len() != names.len() {
            return Err(parse_err(
                line,
                format!("data row {row} has {} values, expected {}", record.len(), names.len()),
            ));
        }
        for (j, field) in record.iter().take(n_inputs).enumerate() {
            let v = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    parse_err(
                        line,
                        format!("bad numeric value '{field}' for '{}' in data row {row}", names[j]),
                    )
                })?;
            data.push(v);
        }
        class_values.push(record[n_inputs].to_string());
    }
    let mut class_set: Vec<String> = class_values.clone();
    class_set.sort();
    class_set.dedup();
    let attributes = names
        .iter()
        .take(n_inputs)
        .map(|n| KeelAttribute {
            name: n.clone(),
            kind: AttributeKind::Real,
            range: None,
        })
        .chain(std::iter::once(KeelAttribute {
            name: names[n_inputs].clone(),
            kind: AttributeKind::Nominal(class_set),
            range: None,
        }))
        .collect();
    Ok(RawDataset {
        header: KeelHeader {
            relation_name: String::new(),
            attributes,
            inputs: names[..n_inputs].to_vec(),
            outputs: vec![names[n_inputs].clone()],
        },
        features: Matrix::from_flat(data, n_inputs)?,
        class_values,
    })
}

fn keel_name(name: &str) -> String {
    if name.chars().any(|c| c.is_whitespace() || ",{}[]'\"%".contains(c)) {
        format!("'{}'", name.replace('\'', "_"))
    } else {
        name.to_string()
    }
}

fn class_attribute_name(d: &Dataset) -> String {
    let mut name = String::from("Class");
    while d.attribute_names().iter().any(|n| n == &name) {
        name.push('_');
    }
    name
}

/// Writes KEEL text. Values use the shortest representation that parses
/// back to the identical `f64`.
pub fn write_keel<W: Write>(d: &Dataset, relation: &str, mut w: W) -> Result<()> {
    writeln!(w, "@relation {}", keel_name(relation))?;
    for (j, name) in d.attribute_names().iter().enumerate() {
        let (lo, hi) = d
            .features()
            .column(j)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if d.n_rows() > 0 {
            writeln!(w, "@attribute {} real [{lo:?}, {hi:?}]", keel_name(name))?;
        } else {
            writeln!(w, "@attribute {} real", keel_name(name))?;
        }
    }
    let class = class_attribute_name(d);
    writeln!(w, "@attribute {class} {{positive, negative}}")?;
    let inputs: Vec<String> = d.attribute_names().iter().map(|n| keel_name(n)).collect();
    writeln!(w, "@inputs {}", inputs.join(", "))?;
    writeln!(w, "@outputs {class}")?;
    writeln!(w, "@data")?;
    for (i, label) in d.labels().iter().enumerate() {
        for v in d.row(i) {
            write!(w, "{v:?}, ")?;
        }
        writeln!(w, "{}", label.as_str())?;
    }
    Ok(())
}

pub fn write_csv<W: Write>(d: &Dataset, w: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    let mut header: Vec<String> = d.attribute_names().to_vec();
    header.push(class_attribute_name(d));
    wtr.write_record(&header)?;
    for (i, label) in d.labels().iter().enumerate() {
        let mut rec: Vec<String> = d.row(i).iter().map(|v| format!("{v:?}")).collect();
        rec.push(label.as_str().to_string());
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn write_dataset<W: Write>(d: &Dataset, format: DataFormat, w: W) -> Result<()> {
    match format {
        DataFormat::Keel => write_keel(d, "dataset", w),
        DataFormat::Csv => write_csv(d, w),
    }
}

pub fn dataset_to_string(d: &Dataset, format: DataFormat) -> Result<String> {
    let mut buf = Vec::new();
    write_dataset(d, format, &mut buf)?;
    Ok(String::from_utf8(buf).expect("writer emits UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "@relation toy
@attribute x real [0.0, 10.0]
@attribute colour {red, green}
@attribute y integer [1, 3]
@attribute Class {a, b, c}
@inputs x, colour, y
@outputs Class
@data
1.5, red, 1, a
2.0 ,green, 2, b

3.25,red,3,c
";

    #[test]
    fn parses_header_and_rows() {
        let raw = parse_keel_str(SMALL).unwrap();
        assert_eq!(raw.header.relation_name, "toy");
        assert_eq!(raw.header.inputs, vec!["x", "colour", "y"]);
        assert_eq!(raw.header.outputs, vec!["Class"]);
        assert_eq!(raw.n_rows(), 3);
        assert_eq!(raw.features.row(1), &[2.0, 1.0, 2.0]);
        assert_eq!(raw.class_values, vec!["a", "b", "c"]);
        assert_eq!(raw.header.attributes[0].range, Some((0.0, 10.0)));
    }

    #[test]
    fn empty_data_section() {
        let raw = parse_keel_str("@relation e\n@attribute x real\n@attribute c {p, n}\n@data\n").unwrap();
        assert_eq!(raw.n_rows(), 0);
        assert_eq!(raw.header.inputs, vec!["x"]);
        assert_eq!(raw.header.outputs, vec!["c"]);
    }

    #[test]
    fn missing_data_reports_line() {
        let err = parse_keel_str("@relation e\n@attribute x real\n@attribute c {p, n}\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn arity_mismatch_names_row() {
        let text = "@relation e\n@attribute x real\n@attribute c {p, n}\n@data\n1, p\n2, 3, n\n";
        let err = parse_keel_str(text).unwrap_err().to_string();
        assert!(err.contains("line 6") && err.contains("data row 1"), "{err}");
    }

    #[test]
    fn unknown_nominal_rejected() {
        let text = "@relation e\n@attribute x real\n@attribute c {p, n}\n@data\n1, q\n";
        let err = parse_keel_str(text).unwrap_err().to_string();
        assert!(err.contains("unknown nominal value 'q'"), "{err}");
    }

    #[test]
    fn out_of_range_values_tolerated() {
        let text = "@relation e\n@attribute x real [0, 1]\n@attribute c {p, n}\n@data\n5, p\n-2, n\n";
        let raw = parse_keel_str(text).unwrap();
        assert_eq!(raw.features.as_flat(), &[5.0, -2.0]);
    }

    #[test]
    fn mapping_covering_everything_has_no_negative_class() {
        let raw = parse_keel_str(SMALL).unwrap();
        let m = TwoClassMapping::new(["a", "b", "c"], Vec::<&str>::new()).unwrap();
        assert!(matches!(reduce_two_class(&raw, &m), Err(Error::NoMajorityClass)));
    }

    #[test]
    fn unmapped_value_listed() {
        let raw = parse_keel_str(SMALL).unwrap();
        let m = TwoClassMapping::new(["a"], ["b"]).unwrap();
        match reduce_two_class(&raw, &m) {
            Err(Error::UnmappedClass(v)) => assert_eq!(v, vec!["c".to_string()]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn one_vs_rest_reduction() {
        let raw = parse_keel_str(SMALL).unwrap();
        let m = TwoClassMapping::one_vs_rest(&raw, ["b"]).unwrap();
        let d = reduce_two_class(&raw, &m).unwrap();
        assert_eq!(d.labels(), &[Label::Negative, Label::Positive, Label::Negative]);
    }

    #[test]
    fn overlapping_mapping_rejected() {
        assert!(TwoClassMapping::new(["a"], ["a", "b"]).is_err());
    }

    #[test]
    fn infer_prefers_minority_then_lexicographic() {
        let text = "@relation e\n@attribute x real\n@attribute c {z, y}\n@data\n1, z\n2, y\n3, y\n";
        let m = TwoClassMapping::infer(&parse_keel_str(text).unwrap()).unwrap();
        assert!(m.positive_values.contains("z"));
        let tie = "@relation e\n@attribute x real\n@attribute c {z, y}\n@data\n1, z\n2, y\n";
        let m = TwoClassMapping::infer(&parse_keel_str(tie).unwrap()).unwrap();
        assert!(m.positive_values.contains("y"));
    }

    #[test]
    fn one_row_keel_output() {
        let d = Dataset::from_rows(&[vec![1.0, 2.5]], vec![Label::Positive]).unwrap();
        let text = dataset_to_string(&d, DataFormat::Keel).unwrap();
        let data: Vec<&str> = text.lines().skip_while(|l| *l != "@data").skip(1).collect();
        assert_eq!(data, vec!["1.0, 2.5, positive"]);
    }

    #[test]
    fn csv_reads_class_from_last_column() {
        let raw = parse_csv("f1,f2,label\n1,2,yes\n3, 4 ,no\n".as_bytes()).unwrap();
        assert_eq!(raw.header.inputs, vec!["f1", "f2"]);
        assert_eq!(raw.features.row(1), &[3.0, 4.0]);
        assert_eq!(raw.class_values, vec!["yes", "no"]);
    }

    #[test]
    fn csv_bad_number_names_row() {
        let err = parse_csv("f1,label\n1,yes\nabc,no\n".as_bytes()).unwrap_err().to_string();
        assert!(err.contains("data row 1"), "{err}");
    }
}
