use std::io::{Read, Write};
use std::path::Path;

use indexmap::IndexSet;
use serde::Deserialize;

use crate::csvio::check_header;
use crate::error::{Error, Result};
use crate::fmt::f64_17;

/// One SCI record as it appears on input.
#[derive(Debug, Clone, PartialEq)]
pub struct SciEdge {
    pub loc_a: String,
    pub loc_b: String,
    pub sci: f64,
}

/// SCI edge list with interned region ids.
///
/// Ids are stored once; edges are `(a, b, sci)` triples of id slots, which
/// keeps a complete county graph (~4.8M pairs) compact in memory.
#[derive(Debug, Clone, Default)]
pub struct SciEdgeList {
    ids: IndexSet<String>,
    edges: Vec<(u32, u32, f64)>,
}

#[derive(Debug, Deserialize)]
struct EdgeRow {
    user_loc: String,
    fr_loc: String,
    scaled_sci: f64,
}

impl SciEdgeList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(ids: usize, edges: usize) -> Self {
        Self {
            ids: IndexSet::with_capacity(ids),
            edges: Vec::with_capacity(edges),
        }
    }

    pub fn push(&mut self, loc_a: &str, loc_b: &str, sci: f64) -> Result<()> {
        if !(sci.is_finite() && sci >= 0.0) {
            return Err(Error::input(format!(
                "SCI for ('{loc_a}', '{loc_b}') must be finite and nonnegative, got {sci}"
            )));
        }
        let a = self.intern(loc_a);
        let b = self.intern(loc_b);
        self.edges.push((a, b, sci));
        Ok(())
    }

    fn intern(&mut self, id: &str) -> u32 {
        if let Some(i) = self.ids.get_index_of(id) {
            return i as u32;
        }
        self.ids.insert(id.to_string());
        (self.ids.len() - 1) as u32
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, f64)> + '_ {
        self.edges
            .iter()
            .map(move |&(a, b, s)| (self.id(a), self.id(b), s))
    }

    pub fn to_edges(&self) -> Vec<SciEdge> {
        self.iter()
            .map(|(a, b, sci)| SciEdge {
                loc_a: a.to_string(),
                loc_b: b.to_string(),
                sci,
            })
            .collect()
    }

    fn id(&self, slot: u32) -> &str {
        self.ids.get_index(slot as usize).expect("interned id")
    }

    pub(crate) fn ids(&self) -> &IndexSet<String> {
        &self.ids
    }

    pub(crate) fn raw(&self) -> &[(u32, u32, f64)] {
        &self.edges
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        check_header(&mut rdr, &["user_loc", "fr_loc", "scaled_sci"])?;
        let mut out = Self::new();
        for row in rdr.deserialize() {
            let row: EdgeRow = row?;
            out.push(&row.user_loc, &row.fr_loc, row.scaled_sci)?;
        }
        Ok(out)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        Self::from_reader(std::io::BufReader::new(std::fs::File::open(path)?))
    }

    pub fn to_writer<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["user_loc", "fr_loc", "scaled_sci"])?;
        for (a, b, s) in self.iter() {
            w.write_record([a, b, &f64_17(s)])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl SciEdgeList {
    pub fn from_edges<I: IntoIterator<Item = SciEdge>>(edges: I) -> Result<Self> {
        let mut out = SciEdgeList::new();
        for e in edges {
            out.push(&e.loc_a, &e.loc_b, e.sci)?;
        }
        Ok(out)
    }
}
