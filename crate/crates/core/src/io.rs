//! On-disk input formats.
//!
//! * similarity matrix: CSV whose first row holds the worker ids, followed by
//!   `n` rows of `n` numbers;
//! * candidate pool: CSV with header `worker_id,p`;
//! * corpus: JSON lines `{"worker_id": .., "task_id": .., "text": ..}`, at most
//!   one record per (task, worker) pair.
//!
//! Every parser takes the file contents and reports problems with 1-based
//! line numbers.

use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::profile::{Experience, TaskRecord, Tokenizer};
use crate::smodel::SimilarityMatrix;
use crate::tmodel::{CandidatePool, Worker};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Matrix,
    Pool,
    Corpus,
}

#[derive(Debug, Clone)]
pub enum Input {
    Matrix(SimilarityMatrix),
    Pool(CandidatePool),
    Corpus(Vec<CorpusRecord>),
}

pub fn load_inputs(path: &Path, kind: InputKind) -> Result<Input> {
    let text = std::fs::read_to_string(path)?;
    Ok(match kind {
        InputKind::Matrix => Input::Matrix(parse_matrix_csv(&text)?),
        InputKind::Pool => Input::Pool(parse_pool_csv(&text)?),
        InputKind::Corpus => Input::Corpus(parse_corpus_jsonl(&text)?),
    })
}

fn csv_rows(text: &str) -> impl Iterator<Item = Result<(usize, csv::StringRecord)>> + '_ {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
        .into_records()
        .map(|r| {
            r.map(|rec| (rec.position().map_or(0, |p| p.line() as usize), rec))
                .map_err(|e| Error::parse(e.position().map_or(0, |p| p.line() as usize), e.to_string()))
        })
}

fn parse_number(field: &str, line: usize, what: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::parse(line, format!("{what} {field:?} is not a finite number")))
}

pub fn parse_matrix_csv(text: &str) -> Result<SimilarityMatrix> {
    let mut rows = csv_rows(text);
    let (line, header) = rows.next().ok_or_else(|| Error::parse(1, "empty matrix file"))??;
    let ids: Vec<String> = header.iter().map(str::to_string).collect();
    let n = ids.len();
    if ids.iter().any(String::is_empty) {
        return Err(Error::parse(line, "empty worker id in header"));
    }
    if ids.iter().collect::<HashSet<_>>().len() != n {
        return Err(Error::parse(line, "duplicate worker id in header"));
    }

    let mut sim = Vec::with_capacity(n * n);
    let mut count = 0;
    for row in rows {
        let (line, rec) = row?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if count == n {
            return Err(Error::parse(line, format!("more than {n} matrix rows")));
        }
        if rec.len() != n {
            return Err(Error::parse(line, format!("expected {n} values, found {}", rec.len())));
        }
        for field in rec.iter() {
            sim.push(parse_number(field, line, "similarity")?);
        }
        count += 1;
    }
    if count != n {
        return Err(Error::parse(line, format!("expected {n} matrix rows, found {count}")));
    }
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (sim[i * n + j], sim[j * n + i]);
            if (a - b).abs() > 1e-9 {
                return Err(Error::parse(
                    line + 1 + i,
                    format!(
                        "matrix is not symmetric: ({}, {}) = {a} but ({}, {}) = {b}",
                        ids[i], ids[j], ids[j], ids[i]
                    ),
                ));
            }
        }
    }
    SimilarityMatrix::with_ids(ids, sim)
}

pub fn parse_pool_csv(text: &str) -> Result<CandidatePool> {
    let mut rows = csv_rows(text);
    let (line, header) = rows.next().ok_or_else(|| Error::parse(1, "empty pool file"))??;
    if header.iter().collect::<Vec<_>>() != ["worker_id", "p"] {
        return Err(Error::parse(line, "pool header must be `worker_id,p`"));
    }
    let mut seen = HashSet::new();
    let mut workers = Vec::new();
    for row in rows {
        let (line, rec) = row?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if rec.len() != 2 {
            return Err(Error::parse(line, format!("expected 2 fields, found {}", rec.len())));
        }
        let id = rec[0].to_string();
        if id.is_empty() {
            return Err(Error::parse(line, "empty worker id"));
        }
        let p = parse_number(&rec[1], line, "probability")?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::parse(line, format!("probability {p} for worker {id:?} is outside [0, 1]")));
        }
        if !seen.insert(id.clone()) {
            return Err(Error::parse(line, format!("duplicate worker id {id:?}")));
        }
        workers.push(Worker { id, p });
    }
    if workers.is_empty() {
        return Err(Error::parse(line, "pool has no workers"));
    }
    CandidatePool::new(workers)
}

/// Comma-separated probabilities, e.g. `0.2,0.4,0.6`.
pub fn parse_probs(text: &str) -> Result<Vec<f64>> {
    let probs = text
        .split(',')
        .enumerate()
        .map(|(i, field)| {
            let field = field.trim();
            let p = field
                .parse::<f64>()
                .map_err(|_| Error::param(format!("probability #{} {field:?} is not a number", i + 1)))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::ProbabilityOutOfRange { index: i, value: p });
            }
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(probs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusRecord {
    pub worker_id: String,
    pub task_id: String,
    pub text: String,
}

impl CorpusRecord {
    pub fn to_task_record(&self, tokenizer: &impl Tokenizer) -> TaskRecord {
        TaskRecord {
            task_id: self.task_id.clone(),
            worker_id: self.worker_id.clone(),
            features: tokenizer.tokenize(&self.text).into_iter().collect::<BTreeSet<_>>(),
        }
    }
}

pub fn parse_corpus_jsonl(text: &str) -> Result<Vec<CorpusRecord>> {
    let mut seen: HashSet<(String, String)> = HashSet::new();
    let mut records = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let rec: CorpusRecord = serde_json::from_str(raw).map_err(|e| Error::parse(line, e.to_string()))?;
        if rec.worker_id.is_empty() || rec.task_id.is_empty() {
            return Err(Error::parse(line, "worker_id and task_id must be non-empty"));
        }
        if !seen.insert((rec.task_id.clone(), rec.worker_id.clone())) {
            return Err(Error::parse(
                line,
                format!(
                    "duplicate record for task {:?} and worker {:?}; a worker has at most one record per task",
                    rec.task_id, rec.worker_id
                ),
            ));
        }
        records.push(rec);
    }
    Ok(records)
}

/// Merges each worker's records into one bag of words, workers in order of first appearance.
pub fn experiences_by_worker(records: &[CorpusRecord], tokenizer: &impl Tokenizer) -> Vec<(String, Experience)> {
    let mut out: Vec<(String, Experience)> = Vec::new();
    for rec in records {
        let tokens = tokenizer.tokenize(&rec.text);
        match out.iter_mut().find(|(id, _)| *id == rec.worker_id) {
            Some((_, e)) => e.extend(tokens),
            None => out.push((rec.worker_id.clone(), Experience::from_tokens(tokens))),
        }
    }
    out
}

/// Writes a matrix in the format read by [`parse_matrix_csv`].
pub fn matrix_to_csv(m: &SimilarityMatrix) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(m.ids()).expect("in-memory write");
    for i in 0..m.n() {
        w.write_record((0..m.n()).map(|j| if i == j { "0".to_string() } else { m.get(i, j).to_string() }))
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}
