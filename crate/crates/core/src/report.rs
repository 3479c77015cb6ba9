//! Dimension tables and verification reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::graded::Slot;

/// Dimensions indexed by slot.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DimTable {
    dims: BTreeMap<Slot, usize>,
}

impl DimTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, slot: Slot, dim: usize) {
        self.dims.insert(slot, dim);
    }

    pub fn get(&self, slot: Slot) -> usize {
        self.dims.get(&slot).copied().unwrap_or(0)
    }

    pub fn slots(&self) -> impl Iterator<Item = (Slot, usize)> + '_ {
        self.dims.iter().map(|(s, d)| (*s, *d))
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.dims.keys().map(|s| s.weight).max()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.dims.keys().map(|s| s.degree).max()
    }

    /// `{"w": {"k": dim}}` with string keys.
    pub fn to_json(&self) -> Value {
        let mut out = serde_json::Map::new();
        for (s, d) in &self.dims {
            let row = out
                .entry(s.weight.to_string())
                .or_insert_with(|| Value::Object(serde_json::Map::new()));
            row.as_object_mut()
                .expect("object")
                .insert(s.degree.to_string(), json!(d));
        }
        Value::Object(out)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("w,k,dim\n");
        for (slot, d) in &self.dims {
            let _ = writeln!(s, "{},{},{}", slot.weight, slot.degree, d);
        }
        s
    }

    /// Aligned text grid, one row per weight.
    pub fn to_table(&self) -> String {
        let max_k = self.max_degree().unwrap_or(0);
        let mut s = String::from("   w");
        for k in 0..=max_k {
            let _ = write!(s, " {:>6}", format!("k={k}"));
        }
        s.push('\n');
        let weights: Vec<usize> = {
            let mut ws: Vec<usize> = self.dims.keys().map(|s| s.weight).collect();
            ws.dedup();
            ws
        };
        for w in weights {
            let _ = write!(s, "{w:>4}");
            for k in 0..=max_k {
                match self.dims.get(&Slot::new(w, k)) {
                    Some(d) => {
                        let _ = write!(s, " {d:>6}");
                    }
                    None => s.push_str("      -"),
                }
            }
            s.push('\n');
        }
        s
    }
}

impl Serialize for DimTable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

/// One checked claim.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub slot: Option<Slot>,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
}

impl Assertion {
    pub fn new(name: impl Into<String>, slot: Option<Slot>, expected: impl Serialize, actual: impl Serialize) -> Self {
        let expected = serde_json::to_value(expected).unwrap_or(Value::Null);
        let actual = serde_json::to_value(actual).unwrap_or(Value::Null);
        let pass = expected == actual;
        Self {
            name: name.into(),
            slot,
            expected,
            actual,
            pass,
        }
    }

    pub fn check(name: impl Into<String>, slot: Option<Slot>, pass: bool) -> Self {
        Self {
            name: name.into(),
            slot,
            expected: json!(true),
            actual: json!(pass),
            pass,
        }
    }
}

/// Output of a CLI command or a library check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub tables: BTreeMap<String, Value>,
    pub assertions: Vec<Assertion>,
    pub version: String,
}

impl Report {
    pub fn new(scenario: impl Into<String>) -> Self {
        Self {
            scenario: scenario.into(),
            tables: BTreeMap::new(),
            assertions: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn table(&mut self, name: impl Into<String>, value: Value) {
        self.tables.insert(name.into(), value);
    }

    pub fn assert(&mut self, a: Assertion) {
        self.assertions.push(a);
    }

    pub fn extend(&mut self, other: Report) {
        self.tables.extend(other.tables);
        self.assertions.extend(other.assertions);
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Assertions as CSV, followed by any dimension tables.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("name,w,k,expected,actual,pass\n");
        for a in &self.assertions {
            let (w, k) = a.slot.map_or((String::new(), String::new()), |s| {
                (s.weight.to_string(), s.degree.to_string())
            });
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                csv_field(&a.name),
                w,
                k,
                csv_field(&a.expected.to_string()),
                csv_field(&a.actual.to_string()),
                a.pass
            );
        }
        for (name, table) in &self.tables {
            if let Some(t) = dim_table_from_json(table) {
                let _ = write!(s, "\n# {name}\n{}", t.to_csv());
            }
        }
        s
    }

    pub fn to_table(&self) -> String {
        let mut s = format!("scenario: {}\n", self.scenario);
        for (name, table) in &self.tables {
            let _ = writeln!(s, "\n[{name}]");
            match dim_table_from_json(table) {
                Some(t) => s.push_str(&t.to_table()),
                None => {
                    let _ = writeln!(s, "{}", serde_json::to_string_pretty(table).expect("json"));
                }
            }
        }
        if !self.assertions.is_empty() {
            s.push_str("\n[assertions]\n");
            for a in &self.assertions {
                let slot = a.slot.map(|s| s.to_string()).unwrap_or_default();
                let _ = writeln!(
                    s,
                    "{} {} {} expected={} actual={}",
                    if a.pass { "PASS" } else { "FAIL" },
                    a.name,
                    slot,
                    a.expected,
                    a.actual
                );
            }
        }
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn dim_table_from_json(v: &Value) -> Option<DimTable> {
    let obj = v.as_object()?;
    let mut t = DimTable::new();
    for (w, row) in obj {
        let w: usize = w.parse().ok()?;
        for (k, d) in row.as_object()? {
            t.insert(Slot::new(w, k.parse().ok()?), usize::try_from(d.as_u64()?).ok()?);
        }
    }
    Some(t)
}
