use std::fmt::Write as _;
use std::time::Instant;

use pgclass::verify::Verdict;
use serde::Serialize;
use serde_json::{Map, Value};

/// One command's results before rendering.
pub struct Output {
    pub items: Vec<Value>,
    pub extra: Map<String, Value>,
    pub human: String,
}

impl Output {
    pub fn new() -> Output {
        Output {
            items: Vec::new(),
            extra: Map::new(),
            human: String::new(),
        }
    }

    /// Adds an item; `value` must serialize to an object and gets a `verdict` field.
    pub fn item(&mut self, value: impl Serialize, verdict: Verdict) {
        let mut v = serde_json::to_value(value).expect("serializable item");
        if let Value::Object(map) = &mut v {
            map.insert("verdict".into(), Value::String(verdict.as_str().into()));
        }
        self.items.push(v);
    }

    pub fn extra(&mut self, key: &str, value: impl Serialize) {
        self.extra.insert(key.into(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn line(&mut self, text: impl AsRef<str>) {
        self.human.push_str(text.as_ref());
        self.human.push('\n');
    }

    fn verdicts(&self) -> impl Iterator<Item = &str> {
        self.items.iter().filter_map(|i| i.get("verdict").and_then(Value::as_str))
    }

    pub fn exit_code(&self) -> i32 {
        if self.verdicts().any(|v| v == "fail") {
            1
        } else if self.verdicts().any(|v| v == "unknown") {
            3
        } else {
            0
        }
    }
}

#[derive(Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub items: Vec<Value>,
    pub summary: Summary,
    pub elapsed_ms: u128,
}

impl Report {
    pub fn new(command: String, out: Output, started: Instant) -> Report {
        let count = |v: &str| out.verdicts().filter(|x| *x == v).count();
        let summary = Summary {
            pass: count("pass"),
            fail: count("fail"),
            unknown: count("unknown"),
            extra: out.extra.clone(),
        };
        Report {
            command,
            items: out.items,
            summary,
            elapsed_ms: started.elapsed().as_millis(),
        }
    }

    pub fn summary_line(&self) -> String {
        let mut s = String::new();
        write!(
            s,
            "{} pass, {} fail, {} unknown ({} ms)",
            self.summary.pass, self.summary.fail, self.summary.unknown, self.elapsed_ms
        )
        .expect("write to string");
        s
    }
}
