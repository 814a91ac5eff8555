use std::collections::{BTreeMap, HashSet};
use std::io::Write;
use std::path::Path;

use log::warn;
use serde::Serialize;
use serde_json::{Map, Value};

use super::{read_file, LoadError, LoadOptions};
use crate::text::{normalize_text, Text};
use crate::types::{check_confidence, Ensemble, ModelId, Prediction, Sample};

const RECORD_FIELDS: [&str; 4] = ["sample_id", "dataset", "ground_truth", "predictions"];
const PREDICTION_FIELDS: [&str; 2] = ["text", "confidence"];

pub fn load_predictions(path: &Path, opts: &LoadOptions) -> Result<Vec<Sample>, LoadError> {
    parse_predictions(&read_file(path)?, opts)
}

/// Parses JSON Lines prediction records. Blank lines are skipped; line
/// numbers in errors are 1-based.
pub fn parse_predictions(input: &str, opts: &LoadOptions) -> Result<Vec<Sample>, LoadError> {
    let mut samples = Vec::new();
    let mut seen = HashSet::new();
    for (idx, raw) in input.lines().enumerate() {
        let line = idx + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let sample = parse_record(raw, line, opts)?;
        if !seen.insert(sample.sample_id.clone()) {
            return Err(LoadError::DuplicateSample {
                line,
                sample: sample.sample_id,
            });
        }
        samples.push(sample);
    }
    if samples.is_empty() {
        return Err(LoadError::EmptyFile);
    }
    Ok(samples)
}

fn check_fields(
    obj: &Map<String, Value>,
    known: &[&str],
    what: &str,
    line: usize,
    opts: &LoadOptions,
) -> Result<(), LoadError> {
    for key in obj.keys().filter(|k| !known.contains(&k.as_str())) {
        if opts.strict {
            return Err(LoadError::parse(line, format!("unknown field {key:?} in {what}")));
        }
        warn!("line {line}: ignoring unknown field {key:?} in {what}");
    }
    Ok(())
}

fn required_str<'a>(obj: &'a Map<String, Value>, key: &str, line: usize) -> Result<&'a str, LoadError> {
    match obj.get(key) {
        Some(Value::String(s)) if !s.is_empty() => Ok(s),
        Some(Value::String(_)) => Err(LoadError::parse(line, format!("{key} is empty"))),
        Some(_) => Err(LoadError::parse(line, format!("{key} must be a string"))),
        None => Err(LoadError::parse(line, format!("missing field {key:?}"))),
    }
}

fn parse_record(raw: &str, line: usize, opts: &LoadOptions) -> Result<Sample, LoadError> {
    let value: Value =
        serde_json::from_str(raw).map_err(|e| LoadError::parse(line, e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| LoadError::parse(line, "record must be a JSON object"))?;
    check_fields(obj, &RECORD_FIELDS, "record", line, opts)?;

    let sample_id = required_str(obj, "sample_id", line)?;
    let dataset = required_str(obj, "dataset", line)?;
    let ground_truth = match obj.get("ground_truth") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(text_field(s, "ground_truth", line, opts)?),
        Some(_) => return Err(LoadError::parse(line, "ground_truth must be a string or null")),
    };

    let preds = match obj.get("predictions") {
        Some(Value::Object(m)) => m,
        Some(_) => return Err(LoadError::parse(line, "predictions must be an object")),
        None => return Err(LoadError::parse(line, "missing field \"predictions\"")),
    };
    if preds.is_empty() {
        return Err(LoadError::parse(line, "predictions is empty"));
    }

    let mut ensemble = Ensemble::new();
    for (model, entry) in preds {
        let model_id =
            ModelId::new(model.as_str()).map_err(|e| LoadError::parse(line, e.to_string()))?;
        let entry = entry.as_object().ok_or_else(|| {
            LoadError::parse(line, format!("prediction of {model:?} must be an object"))
        })?;
        check_fields(entry, &PREDICTION_FIELDS, &format!("prediction of {model:?}"), line, opts)?;
        let text = match entry.get("text") {
            Some(Value::String(s)) => text_field(s, &format!("predictions.{model}.text"), line, opts)?,
            _ => {
                return Err(LoadError::parse(
                    line,
                    format!("prediction of {model:?} needs a string \"text\""),
                ))
            }
        };
        let confidence = entry
            .get("confidence")
            .and_then(Value::as_f64)
            .ok_or_else(|| {
                LoadError::parse(line, format!("prediction of {model:?} needs a numeric \"confidence\""))
            })?;
        let confidence =
            check_confidence(confidence).map_err(|_| LoadError::InvalidConfidence {
                line,
                model: model.clone(),
                value: confidence,
            })?;
        ensemble.insert(
            model_id,
            Prediction::new(text, confidence).expect("confidence checked"),
        );
    }

    Sample::new(sample_id, dataset, ground_truth, ensemble)
        .map_err(|e| LoadError::parse(line, e.to_string()))
}

fn text_field(raw: &str, field: &str, line: usize, opts: &LoadOptions) -> Result<Text, LoadError> {
    normalize_text(raw, &opts.alphabet).map_err(|source| LoadError::InvalidText {
        line,
        field: field.to_string(),
        source,
    })
}

#[derive(Serialize)]
struct RecordOut<'a> {
    sample_id: &'a str,
    dataset: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    ground_truth: Option<&'a str>,
    predictions: BTreeMap<&'a str, PredictionOut<'a>>,
}

#[derive(Serialize)]
struct PredictionOut<'a> {
    text: &'a str,
    confidence: f64,
}

/// Writes samples in the format read by [`parse_predictions`].
pub fn write_predictions<W: Write>(samples: &[Sample], mut out: W) -> std::io::Result<()> {
    for s in samples {
        let record = RecordOut {
            sample_id: &s.sample_id,
            dataset: &s.dataset,
            ground_truth: s.ground_truth.as_ref().map(Text::as_str),
            predictions: s
                .predictions
                .iter()
                .map(|(m, p)| {
                    (
                        m.as_str(),
                        PredictionOut {
                            text: p.text().as_str(),
                            confidence: p.confidence(),
                        },
                    )
                })
                .collect(),
        };
        serde_json::to_writer(&mut out, &record)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
