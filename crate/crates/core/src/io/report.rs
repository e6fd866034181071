//! Line-oriented reports.
//!
//! Every line is a tab-separated record whose first field names its kind:
//!
//! ```text
//! command <TAB> rips classify
//! param   <TAB> max-iter <TAB> 30
//! result  <TAB> verdict <TAB> SurfaceType(0)
//! table   <TAB> steps <TAB> index <TAB> volume ...
//! row     <TAB> steps <TAB> 0 <TAB> 1 ...
//! note    <TAB> free text
//! ```
//!
//! Output depends only on the inputs, so repeated runs are byte-identical.

use std::fmt;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    lines: Vec<Vec<String>>,
}

fn clean(s: &str) -> String {
    s.replace(['\t', '\n'], " ")
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            lines: vec![vec!["command".into(), clean(command)]],
        }
    }

    pub fn param(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.lines.push(vec!["param".into(), clean(key), clean(&value.to_string())]);
        self
    }

    pub fn result(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.lines.push(vec!["result".into(), clean(key), clean(&value.to_string())]);
        self
    }

    pub fn table(&mut self, name: &str, columns: &[&str]) -> &mut Self {
        let mut l = vec!["table".into(), clean(name)];
        l.extend(columns.iter().map(|c| clean(c)));
        self.lines.push(l);
        self
    }

    pub fn row<I, S>(&mut self, table: &str, values: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: fmt::Display,
    {
        let mut l = vec!["row".into(), clean(table)];
        l.extend(values.into_iter().map(|v| clean(&v.to_string())));
        self.lines.push(l);
        self
    }

    pub fn note(&mut self, text: &str) -> &mut Self {
        self.lines.push(vec!["note".into(), clean(text)]);
        self
    }

    /// Value of the first `result` line with this key.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.lines
            .iter()
            .find(|l| l[0] == "result" && l[1] == key)
            .map(|l| l[2].as_str())
    }

    /// Rows of a table, without the leading `row` and table name.
    pub fn rows(&self, table: &str) -> Vec<&[String]> {
        self.lines
            .iter()
            .filter(|l| l[0] == "row" && l[1] == table)
            .map(|l| &l[2..])
            .collect()
    }

    /// Reads a rendered report back.
    pub fn parse(text: &str) -> Self {
        Report {
            lines: text
                .lines()
                .filter(|l| !l.is_empty())
                .map(|l| l.split('\t').map(str::to_string).collect())
                .collect(),
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(f, "{}", l.join("\t"))?;
        }
        Ok(())
    }
}
