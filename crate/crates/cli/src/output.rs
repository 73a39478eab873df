//! File emission: CSV or JSON tables and gnuplot scripts beside them.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use rdexact::numerics::fmt17;

use crate::config::Format;

/// A table with named columns, written as CSV or as a JSON array of rows.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| fmt17(*x)).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        w.flush()
    }

    fn to_json(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, x)| (c.to_string(), json_number(*x)))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

/// Non-finite values become `null`.
pub fn json_number(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x).map_or(serde_json::Value::Null, serde_json::Value::Number)
}

pub struct Emitter {
    dir: PathBuf,
    format: Format,
    written: Vec<PathBuf>,
}

impl Emitter {
    pub fn new(dir: &Path, format: Format) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_owned(),
            format,
            written: Vec::new(),
        })
    }

    /// Writes `<stem>.csv` or `<stem>.json` and returns the file name.
    pub fn table(&mut self, stem: &str, table: &Table) -> io::Result<String> {
        match self.format {
            Format::Csv => {
                let name = format!("{stem}.csv");
                table.write_csv(BufWriter::new(self.create(&name)?))?;
                Ok(name)
            }
            Format::Json => {
                let name = format!("{stem}.json");
                self.json(&name, &table.to_json())?;
                Ok(name)
            }
        }
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> io::Result<()> {
        let mut w = BufWriter::new(self.create(name)?);
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        w.flush()
    }

    /// A gnuplot script; only emitted next to CSV data.
    pub fn script(&mut self, name: &str, body: &str) -> io::Result<()> {
        if self.format == Format::Csv {
            let mut f = self.create(name)?;
            f.write_all(body.as_bytes())?;
        }
        Ok(())
    }

    pub fn written(&self) -> Vec<String> {
        self.written
            .iter()
            .map(|p| p.display().to_string())
            .collect()
    }

    fn create(&mut self, name: &str) -> io::Result<File> {
        let path = self.dir.join(name);
        let f = File::create(&path)?;
        self.written.push(path);
        Ok(f)
    }
}

const PREAMBLE: &str = "set datafile separator ','\nset key autotitle columnhead\nset terminal pngcairo size 900,600\n";

pub fn diffusivity_script(data: &str, kind: &str) -> String {
    format!(
        "{PREAMBLE}set output '{kind}_diffusivity.png'\n\
         set xlabel 'theta'\nset ylabel 'D'\n\
         plot '{data}' using 1:2 with lines lw 2, \
         '' using 1:3 with lines dt 2, \
         '' using 1:4 with lines dt 3, \
         '' using 1:5 with lines dt 4\n"
    )
}

pub fn profiles_script(data: &str, kind: &str, times: usize) -> String {
    format!(
        "{PREAMBLE}set output '{kind}_profiles.png'\n\
         set xlabel 'r'\nset ylabel 'theta'\n\
         # blank-line-free CSV: select each time block by row ranges\n\
         n = {times}\n\
         stats '{data}' using 1 nooutput\nm = STATS_records / n\n\
         plot for [i=0:n-1] '{data}' every ::i*m::(i+1)*m-1 using 2:4 with lines title sprintf('block %d', i+1)\n"
    )
}
