use clap::ValueEnum;
use mtz_core::verify::Status;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str], rows: Vec<Vec<String>>) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows }
    }

    fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
    }
}

/// A command result in all three renderings.
pub struct Outcome {
    pub status: Status,
    pub json: Value,
    pub table: Table,
    pub text: String,
}

impl Outcome {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("json values serialize") + "\n",
            Format::Csv => self.table.to_csv(),
            Format::Text => self.text.clone(),
        }
    }
}

pub trait ExitStatus {
    fn code(self) -> u8;
}

impl ExitStatus for Status {
    fn code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 2,
            Status::BudgetExceeded => 3,
        }
    }
}
