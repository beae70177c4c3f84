use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Where a reported value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Read from the input or the command line.
    Input,
    /// Produced by the algorithm under test.
    Computed,
    /// Produced by an exact exhaustive solver.
    Oracle,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Input => "input",
            Provenance::Computed => "computed",
            Provenance::Oracle => "oracle",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    ValidationFailure,
}

#[derive(Debug, Clone, Serialize)]
pub struct Field {
    pub name: String,
    pub value: Value,
    pub provenance: Provenance,
}

/// Everything needed to replay a run: command, input digest, parameters and
/// seed, followed by the tagged results.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub status: Status,
    pub instance_digest: Option<String>,
    pub seed: Option<u64>,
    pub parameters: BTreeMap<String, String>,
    pub fields: Vec<Field>,
    pub wall_time_ms: f64,
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            status: Status::Ok,
            instance_digest: None,
            seed: None,
            parameters: BTreeMap::new(),
            fields: Vec::new(),
            wall_time_ms: 0.0,
        }
    }

    pub fn param(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(name.to_string(), value.to_string());
        self
    }

    pub fn field(&mut self, name: &str, value: impl Into<Value>, provenance: Provenance) -> &mut Self {
        self.fields.push(Field { name: name.to_string(), value: value.into(), provenance });
        self
    }

    pub fn computed(&mut self, name: &str, value: impl Into<Value>) -> &mut Self {
        self.field(name, value, Provenance::Computed)
    }

    pub fn oracle(&mut self, name: &str, value: impl Into<Value>) -> &mut Self {
        self.field(name, value, Provenance::Oracle)
    }

    pub fn input(&mut self, name: &str, value: impl Into<Value>) -> &mut Self {
        self.field(name, value, Provenance::Input)
    }

    pub fn fail(&mut self) -> &mut Self {
        self.status = Status::ValidationFailure;
        self
    }

    pub fn set_wall_time(&mut self, elapsed: Duration) {
        self.wall_time_ms = elapsed.as_secs_f64() * 1e3;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

fn plain(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command    {}", self.command)?;
        let status = match self.status {
            Status::Ok => "ok",
            Status::ValidationFailure => "validation failure",
        };
        writeln!(f, "status     {status}")?;
        if let Some(d) = &self.instance_digest {
            writeln!(f, "instance   {d}")?;
        }
        if let Some(s) = self.seed {
            writeln!(f, "seed       {s}")?;
        }
        for (k, v) in &self.parameters {
            writeln!(f, "param      {k} = {v}")?;
        }
        let width = self.fields.iter().map(|x| x.name.len()).max().unwrap_or(0);
        for x in &self.fields {
            writeln!(f, "{:<10} {:<width$} = {}", format!("[{}]", x.provenance), x.name, plain(&x.value))?;
        }
        write!(f, "wall time  {:.3} ms", self.wall_time_ms)
    }
}
