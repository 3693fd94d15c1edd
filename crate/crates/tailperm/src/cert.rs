//! JSON certificates for codes: parameters, canonical member list, sizes,
//! and a verifier stamp with a content hash, so downstream tooling can trust
//! a code file without re-deriving it (re-verification stays available).

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::check::{Capability, Claim, TailCode};
use crate::perm::PartialPermutation;
use crate::tail::ErrorModel;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CertError {
    #[error("cannot parse certificate: {0}")]
    Json(#[from] serde_json::Error),
    #[error("member {0:?} does not parse over q={1}")]
    Member(String, u8),
    #[error("member list disagrees with the recorded size: {found} vs {recorded}")]
    SizeMismatch { found: usize, recorded: u64 },
    #[error("unsupported certificate format version {0}")]
    Version(u32),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeCertificate {
    pub format_version: u32,
    pub params: CertParams,
    pub members: Vec<String>,
    pub sizes: CertSizes,
    pub verifier: CertVerifier,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CertParams {
    pub q: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ErrorModel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub capability: Option<Capability>,
    /// Which construction produced the code: "det", "cor", "cor-family",
    /// "oracle-witness", "custom".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer: Option<OuterDescriptor>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OuterDescriptor {
    pub family: String,
    pub ell: u8,
    pub n: usize,
    pub d: usize,
    pub size: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertSizes {
    pub actual: u64,
    /// Closed-form size when the code is a named construction, as a decimal
    /// string.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertVerifier {
    /// "verified", "failed", or "unverified".
    pub status: String,
    pub hash: String,
}

/// sha256 over the canonical member list, one member per line.
pub fn content_hash(members: &[String]) -> String {
    let mut hasher = Sha256::new();
    for member in members {
        hasher.update(member.as_bytes());
        hasher.update(b"\n");
    }
    hex::encode(hasher.finalize())
}

impl CodeCertificate {
    /// Builds a certificate; when the params carry a full claim, the
    /// verifier stamp reflects an actual predicate run.
    pub fn for_code(code: &TailCode, mut params: CertParams, formula: Option<String>) -> Self {
        params.q = code.q();
        let members: Vec<String> = code.iter().map(|m| m.to_string()).collect();
        let status = match (params.model, params.t, params.capability) {
            (Some(model), Some(t), Some(capability)) => {
                let claimed = code.clone().with_claim(Claim {
                    model,
                    t,
                    capability,
                });
                if claimed.verify_claim() {
                    "verified"
                } else {
                    "failed"
                }
            }
            _ => "unverified",
        };
        let hash = content_hash(&members);
        CodeCertificate {
            format_version: FORMAT_VERSION,
            sizes: CertSizes {
                actual: members.len() as u64,
                formula,
            },
            members,
            params,
            verifier: CertVerifier {
                status: status.to_string(),
                hash,
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CertError> {
        let cert: CodeCertificate = serde_json::from_str(text)?;
        if cert.format_version != FORMAT_VERSION {
            return Err(CertError::Version(cert.format_version));
        }
        Ok(cert)
    }

    /// Parses the member list back into a code.
    pub fn code(&self) -> Result<TailCode, CertError> {
        let members = self
            .members
            .iter()
            .map(|text| {
                PartialPermutation::parse(text, self.params.q)
                    .map_err(|_| CertError::Member(text.clone(), self.params.q))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if members.len() as u64 != self.sizes.actual {
            return Err(CertError::SizeMismatch {
                found: members.len(),
                recorded: self.sizes.actual,
            });
        }
        Ok(TailCode::new(self.params.q, members).expect("parsed members share the alphabet"))
    }

    /// Recomputes the content hash.
    pub fn hash_ok(&self) -> bool {
        content_hash(&self.members) == self.verifier.hash
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_det_code, det_size};

    #[test]
    fn roundtrip_through_json() {
        let code = build_det_code(4, 1).unwrap();
        let cert = CodeCertificate::for_code(
            &code,
            CertParams {
                t: Some(1),
                model: Some(ErrorModel::Deletion),
                capability: Some(Capability::Detect),
                kind: Some("det".to_string()),
                ..CertParams::default()
            },
            Some(det_size(4, 1).to_string()),
        );
        assert_eq!(cert.verifier.status, "verified");
        assert_eq!(cert.sizes.actual, 36);
        assert_eq!(cert.sizes.formula.as_deref(), Some("36"));

        let json = cert.to_json();
        let back = CodeCertificate::from_json(&json).unwrap();
        assert!(back.hash_ok());
        assert_eq!(back.code().unwrap(), code);
    }

    #[test]
    fn failed_claim_is_stamped() {
        let code = TailCode::from_texts(3, &["12", "2"]).unwrap();
        let cert = CodeCertificate::for_code(
            &code,
            CertParams {
                t: Some(1),
                model: Some(ErrorModel::Deletion),
                capability: Some(Capability::Detect),
                kind: Some("custom".to_string()),
                ..CertParams::default()
            },
            None,
        );
        assert_eq!(cert.verifier.status, "failed");
    }

    #[test]
    fn tampering_breaks_the_hash() {
        let code = TailCode::from_texts(3, &["12", "32"]).unwrap();
        let mut cert = CodeCertificate::for_code(&code, CertParams::default(), None);
        assert!(cert.hash_ok());
        cert.members[0] = "21".to_string();
        assert!(!cert.hash_ok());
    }
}
