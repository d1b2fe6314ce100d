use serde::Serialize;

/// One named check with its worst residual.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub max_residual: f64,
    pub pass: bool,
    /// Informational checks never fail the report.
    pub gating: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerificationReport {
    pub subject: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        Self { subject: subject.into(), checks: Vec::new() }
    }

    /// Record a residual compared against `tol`.
    pub fn residual(&mut self, name: &str, residual: f64, tol: f64) {
        let pass = residual.is_finite() && residual < tol;
        self.checks.push(Check { name: name.into(), max_residual: residual, pass, gating: true, note: None });
    }

    pub fn flag(&mut self, name: &str, pass: bool, note: Option<String>) {
        self.checks.push(Check { name: name.into(), max_residual: if pass { 0.0 } else { 1.0 }, pass, gating: true, note });
    }

    /// Record a measured quantity that does not gate the overall result.
    pub fn info(&mut self, name: &str, residual: f64, note: Option<String>) {
        self.checks.push(Check { name: name.into(), max_residual: residual, pass: true, gating: false, note });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !c.gating || c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn merge(&mut self, other: VerificationReport) {
        for mut c in other.checks {
            c.name = format!("{}/{}", other.subject, c.name);
            self.checks.push(c);
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.subject);
        for c in &self.checks {
            let tag = if !c.gating { "info" } else if c.pass { "pass" } else { "FAIL" };
            s.push_str(&format!("  [{tag}] {:<48} {:.3e}", c.name, c.max_residual));
            if let Some(n) = &c.note {
                s.push_str(&format!("  ({n})"));
            }
            s.push('\n');
        }
        s
    }
}
