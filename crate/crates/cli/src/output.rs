//! JSON documents emitted with `--format json`. Each carries `schema_version`
//! and deserializes back into the same type.

use serde::{Deserialize, Serialize};
use veronese_core::{EqualityReport, MatrixDocument};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixOutput {
    pub schema_version: u32,
    #[serde(flatten)]
    pub matrix: MatrixDocument,
    /// `rows` written as monomials in `x0..xn`.
    pub monomials: Vec<Vec<String>>,
    pub minor_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorsOutput {
    pub schema_version: u32,
    pub n: usize,
    pub d: u32,
    pub count: usize,
    pub minors: Vec<String>,
}

/// Shared by `eval` and `invert`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapOutput {
    pub schema_version: u32,
    pub n: usize,
    pub d: u32,
    pub field: String,
    pub input: String,
    pub output: Option<String>,
    pub chart: Option<usize>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberOutput {
    pub schema_version: u32,
    pub n: usize,
    pub d: u32,
    pub field: String,
    pub point: String,
    pub member: bool,
    /// First minor that does not vanish, when `member` is false.
    pub minor: Option<String>,
    pub value: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub schema_version: u32,
    pub n: usize,
    pub d: u32,
    pub field: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleOutput {
    pub schema_version: u32,
    pub n: usize,
    pub d: u32,
    pub q: u64,
    pub equal: bool,
    pub reports: Vec<EqualityReport>,
}
