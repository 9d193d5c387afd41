//! The verification ledger: one row per acceptance claim.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub id: String,
    pub title: String,
    pub expected: String,
    pub computed: String,
    pub tolerance: String,
    pub pass: bool,
    pub runtime_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Ledger {
    pub tool: String,
    pub version: String,
    pub k_max: usize,
    pub rows: Vec<Row>,
}

impl Ledger {
    pub fn new(k_max: usize) -> Ledger {
        Ledger {
            tool: "trivex".into(),
            version: trivex::VERSION.into(),
            k_max,
            rows: Vec::new(),
        }
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable ledger")
    }

    pub fn print_table(&self) {
        println!(
            "{:<6} {:<34} {:<6} {:>9}  detail",
            "id", "claim", "status", "ms"
        );
        println!("{}", "-".repeat(100));
        for r in &self.rows {
            let status = if r.pass { "PASS" } else { "FAIL" };
            println!(
                "{:<6} {:<34} {:<6} {:>9}  expected {} | computed {} | tol {}",
                r.id, r.title, status, r.runtime_ms, r.expected, r.computed, r.tolerance
            );
        }
        let failed = self.rows.iter().filter(|r| !r.pass).count();
        println!("{}", "-".repeat(100));
        println!(
            "{} rows, {} passed, {} failed",
            self.rows.len(),
            self.rows.len() - failed,
            failed
        );
    }
}

/// Runs `f`, catching panics, and turns the outcome into a ledger row.
pub fn timed_row(
    id: &str,
    title: &str,
    tolerance: &str,
    f: impl FnOnce() -> Result<(String, String, bool), anyhow::Error>,
) -> Row {
    let start = std::time::Instant::now();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f));
    let runtime_ms = start.elapsed().as_millis() as u64;
    let (expected, computed, pass) = match outcome {
        Ok(Ok(t)) => t,
        Ok(Err(e)) => ("-".into(), format!("error: {e:#}"), false),
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            ("-".into(), format!("panic: {msg}"), false)
        }
    };
    Row {
        id: id.into(),
        title: title.into(),
        expected,
        computed,
        tolerance: tolerance.into(),
        pass,
        runtime_ms,
    }
}
