//! The encryption scheme: Setup, Extract, Encrypt, Decrypt.
//!
//! All key material lives in one subspace lattice L(F_q^n). Setup fixes a
//! pairing target `d`, a public space `P` not containing `d`, and a secret
//! master space `s` containing `d`; the global public key is
//! `P_pub = P . s`. Identities hash to public spaces `Q_ID`, private keys
//! are `S_ID = s . Q_ID`, and a ciphertext is the pair
//! `(U, V) = (r . P, M xor H2(e_d(Q_ID . r, P_pub)))` for an ephemeral
//! `r >= d`. Decryption works because the pairing is bilinear over `[d, I]`:
//! `e_d(s.Q, r.P) = e_d(Q.r, P.s)`.
//!
//! Three parameter policies fix the dimension schedule; see [`PolicyKind`].
//! Every randomized step is driven by the caller's generator and bounded by
//! [`RETRY_BUDGET`] resampling attempts, after which a descriptive error is
//! returned instead of looping forever.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use crate::pairing::{pair_subspaces, PairingContext};
use crate::rng;
use crate::subspace::Subspace;
use crate::{Element, Lattice};
use rand::RngCore;
use sha2::{Digest, Sha256};

/// Cap on rejection-resampling loops in setup, hashing, and encryption.
pub const RETRY_BUDGET: u32 = 64;

/// Dimension schedule for the scheme's elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    /// The five-dimensional worked instance: `d` a line, `P` a plane, `s` and
    /// the ephemeral `r` hyperplanes, identities hashing to planes.
    Geometry5,
    /// Fractional schedule on n >= 16: `d` spans ceil(5n/16) sampled vectors,
    /// `P` and `Q_ID` span ceil(n/2), and `s`, `r` extend `d` by ceil(9n/16)
    /// fresh vectors.
    Vector16ths,
    /// Large-n guidance: `d` of dimension floor(n/2), `P` between
    /// floor(n/2)+1 and n-3, `s` and `r` of dimension n-1 or n-2 above `d`,
    /// identities between floor(n/2)+1 and n-2.
    General,
}

impl PolicyKind {
    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Geometry5 => "geometry5",
            PolicyKind::Vector16ths => "vector16ths",
            PolicyKind::General => "general",
        }
    }

    pub fn from_name(name: &str) -> Option<PolicyKind> {
        match name {
            "geometry5" => Some(PolicyKind::Geometry5),
            "vector16ths" => Some(PolicyKind::Vector16ths),
            "general" => Some(PolicyKind::General),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamPolicy {
    kind: PolicyKind,
    field: FieldSpec,
    n: usize,
    message_bits: usize,
    issuance_bound: u64,
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

impl ParamPolicy {
    pub fn new(kind: PolicyKind, field: FieldSpec, n: usize, message_bits: usize) -> Result<Self> {
        let min_n = match kind {
            PolicyKind::Geometry5 => 5,
            PolicyKind::Vector16ths => 16,
            PolicyKind::General => 8,
        };
        if kind == PolicyKind::Geometry5 && n != 5 {
            return Err(Error::InvalidParameter {
                what: "ambient dimension",
                detail: format!("geometry5 fixes n = 5, got {n}"),
            });
        }
        if n < min_n {
            return Err(Error::InvalidParameter {
                what: "ambient dimension",
                detail: format!("{} needs n >= {min_n}, got {n}", kind.name()),
            });
        }
        Ok(ParamPolicy {
            kind,
            field,
            n,
            message_bits,
            issuance_bound: field.modulus(),
        })
    }

    pub fn geometry5(field: FieldSpec, message_bits: usize) -> Result<Self> {
        Self::new(PolicyKind::Geometry5, field, 5, message_bits)
    }

    pub fn vector16ths(field: FieldSpec, n: usize, message_bits: usize) -> Result<Self> {
        Self::new(PolicyKind::Vector16ths, field, n, message_bits)
    }

    pub fn general(field: FieldSpec, n: usize, message_bits: usize) -> Result<Self> {
        Self::new(PolicyKind::General, field, n, message_bits)
    }

    /// Overrides the issuance cap (default: the field modulus).
    pub fn with_issuance_bound(mut self, bound: u64) -> Self {
        self.issuance_bound = bound;
        self
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn message_bits(&self) -> usize {
        self.message_bits
    }

    pub fn message_bytes(&self) -> usize {
        self.message_bits.div_ceil(8)
    }

    pub fn issuance_bound(&self) -> u64 {
        self.issuance_bound
    }

    /// Nominal dimension of the pairing target `d`.
    pub fn d_dim(&self) -> usize {
        match self.kind {
            PolicyKind::Geometry5 => 2,
            PolicyKind::Vector16ths => ceil_div(5 * self.n, 16),
            PolicyKind::General => self.n / 2,
        }
    }

    /// Inclusive dimension range for the public space `P`.
    pub fn p_dims(&self) -> (usize, usize) {
        match self.kind {
            PolicyKind::Geometry5 => (3, 3),
            PolicyKind::Vector16ths => {
                let k = ceil_div(self.n, 2);
                (k, k)
            }
            PolicyKind::General => (self.n / 2 + 1, self.n - 3),
        }
    }

    /// Admissible dimensions for the master space `s` (and ephemeral `r`).
    pub fn s_dims(&self) -> Vec<usize> {
        match self.kind {
            PolicyKind::Geometry5 => vec![4],
            PolicyKind::Vector16ths => vec![self.d_dim() + ceil_div(9 * self.n, 16)],
            PolicyKind::General => vec![self.n - 2, self.n - 1],
        }
    }

    /// Inclusive dimension range for identity spaces `Q_ID`.
    pub fn q_dims(&self) -> (usize, usize) {
        match self.kind {
            PolicyKind::Geometry5 => (3, 3),
            PolicyKind::Vector16ths => {
                let k = ceil_div(self.n, 2);
                (k, k)
            }
            PolicyKind::General => (self.n / 2 + 1, self.n - 2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicParams {
    policy: ParamPolicy,
    d: Subspace,
    p: Subspace,
    p_pub: Subspace,
    format_version: u16,
}

impl PublicParams {
    /// Reassembles parameters (e.g. from a file), revalidating the publicly
    /// checkable structure.
    pub fn from_parts(
        policy: ParamPolicy,
        d: Subspace,
        p: Subspace,
        p_pub: Subspace,
    ) -> Result<Self> {
        let n = policy.ambient_dim();
        let field = policy.field();
        for (name, s) in [("d", &d), ("P", &p), ("Ppub", &p_pub)] {
            if s.field() != field || s.ambient_dim() != n {
                return Err(Error::InvalidParameter {
                    what: "public parameters",
                    detail: format!("{name} does not live in F_{}^{n}", field.modulus()),
                });
            }
        }
        if d.is_zero() || d.is_full() {
            return Err(Error::Precondition(
                "pairing target d must satisfy O < d < I".into(),
            ));
        }
        if d.leq(&p)? {
            return Err(Error::Precondition("d must not be contained in P".into()));
        }
        if !p_pub.leq(&p)? {
            return Err(Error::Precondition("P_pub must be contained in P".into()));
        }
        Ok(PublicParams {
            policy,
            d,
            p,
            p_pub,
            format_version: 1,
        })
    }

    pub fn policy(&self) -> &ParamPolicy {
        &self.policy
    }

    pub fn d(&self) -> &Subspace {
        &self.d
    }

    pub fn p(&self) -> &Subspace {
        &self.p
    }

    pub fn p_pub(&self) -> &Subspace {
        &self.p_pub
    }

    pub fn format_version(&self) -> u16 {
        self.format_version
    }

    /// Canonical text form: one policy line, then the `d`, `P`, `Ppub`
    /// blocks in canonical subspace serialization. This is the hashing
    /// pre-image for identity derivation and the ciphertext header.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = format!(
            "policy={} q={} n={} msgbits={} issuance_bound={} version={}\n",
            self.policy.kind.name(),
            self.policy.field.modulus(),
            self.policy.n,
            self.policy.message_bits,
            self.policy.issuance_bound,
            self.format_version,
        )
        .into_bytes();
        for (tag, space) in [("d", &self.d), ("P", &self.p), ("Ppub", &self.p_pub)] {
            out.extend_from_slice(tag.as_bytes());
            out.extend_from_slice(b":\n");
            out.extend_from_slice(&space.canonical_bytes());
        }
        out
    }

    pub fn params_hash(&self) -> [u8; 32] {
        Sha256::digest(self.canonical_bytes()).into()
    }

    /// Hex form of [`Self::params_hash`], carried by ciphertexts as header.
    pub fn header_hex(&self) -> String {
        hex_encode(&self.params_hash())
    }

    pub fn pairing_context(&self) -> Result<PairingContext> {
        PairingContext::new(
            Lattice::subspaces(self.policy.field, self.policy.n),
            Element::Space(self.d.clone()),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MasterKey {
    s: Subspace,
    issued: u64,
}

impl MasterKey {
    pub fn from_parts(s: Subspace, issued: u64) -> Self {
        MasterKey { s, issued }
    }

    pub fn s(&self) -> &Subspace {
        &self.s
    }

    /// Number of private keys extracted under this master key so far.
    pub fn issued(&self) -> u64 {
        self.issued
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateKey {
    id: Vec<u8>,
    s_id: Subspace,
}

impl PrivateKey {
    pub fn from_parts(id: Vec<u8>, s_id: Subspace) -> Self {
        PrivateKey { id, s_id }
    }

    pub fn id(&self) -> &[u8] {
        &self.id
    }

    pub fn s_id(&self) -> &Subspace {
        &self.s_id
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext {
    u: Subspace,
    v: Vec<u8>,
    bits: usize,
    header: String,
}

impl Ciphertext {
    pub fn from_parts(u: Subspace, v: Vec<u8>, bits: usize, header: String) -> Self {
        Ciphertext { u, v, bits, header }
    }

    pub fn u(&self) -> &Subspace {
        &self.u
    }

    pub fn v(&self) -> &[u8] {
        &self.v
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn header(&self) -> &str {
        &self.header
    }
}

/// Intermediate values of one encryption, for analysis harnesses and
/// oracle cross-checks. The ephemeral space `r` itself is never exposed.
#[derive(Debug, Clone)]
pub struct EncryptTrace {
    pub q_meet_r: Subspace,
    pub joined_with_p_pub: Subspace,
    pub session_key: Subspace,
}

/// Runs Setup: samples `d`, `P`, `s` under the policy's dimension schedule,
/// enforcing `d <= s`, `not (d <= P)` and `not (P <= s)` by bounded
/// rejection, and publishes `P_pub = P . s`.
pub fn setup<R: RngCore + ?Sized>(
    policy: &ParamPolicy,
    rng: &mut R,
) -> Result<(PublicParams, MasterKey)> {
    for _ in 0..RETRY_BUDGET {
        let Some(d) = sample_d(policy, rng) else {
            continue;
        };
        let Some(p) = sample_p(policy, rng) else {
            continue;
        };
        if d.leq(&p)? {
            continue;
        }
        let Some(s) = sample_above(policy, &d, rng) else {
            continue;
        };
        if p.leq(&s)? {
            continue;
        }
        debug_assert!(d.leq(&s)?);
        let p_pub = s.meet(&p)?;
        let params = PublicParams {
            policy: policy.clone(),
            d,
            p,
            p_pub,
            format_version: 1,
        };
        let msk = MasterKey { s, issued: 0 };
        return Ok((params, msk));
    }
    Err(Error::SetupFailure(RETRY_BUDGET))
}

fn sample_d<R: RngCore + ?Sized>(policy: &ParamPolicy, rng: &mut R) -> Option<Subspace> {
    let field = policy.field();
    let n = policy.ambient_dim();
    match policy.kind() {
        PolicyKind::Geometry5 | PolicyKind::General => {
            Subspace::random_of_dim(policy.d_dim(), field, n, rng).ok()
        }
        PolicyKind::Vector16ths => {
            let d = Subspace::random_span(policy.d_dim(), field, n, rng);
            (!d.is_zero() && !d.is_full()).then_some(d)
        }
    }
}

fn sample_p<R: RngCore + ?Sized>(policy: &ParamPolicy, rng: &mut R) -> Option<Subspace> {
    let (lo, hi) = policy.p_dims();
    let k = rng::uniform_range(rng, lo as u64, hi as u64) as usize;
    Subspace::random_of_dim(k, policy.field(), policy.ambient_dim(), rng).ok()
}

/// Samples a space containing `base` under the policy's `s`/`r` schedule.
fn sample_above<R: RngCore + ?Sized>(
    policy: &ParamPolicy,
    base: &Subspace,
    rng: &mut R,
) -> Option<Subspace> {
    let field = policy.field();
    let n = policy.ambient_dim();
    match policy.kind() {
        PolicyKind::Geometry5 => extend_to_dim(base, 4, rng),
        PolicyKind::Vector16ths => {
            let fresh = Matrix::random(ceil_div(9 * n, 16), n, field, rng);
            let stacked = base.basis().stack(&fresh).ok()?;
            Some(Subspace::from_spanning(&stacked))
        }
        PolicyKind::General => {
            let dims = policy.s_dims();
            let target = dims[rng::uniform(rng, dims.len() as u64) as usize];
            extend_to_dim(base, target, rng)
        }
    }
}

/// Extends `base` by uniform vectors, keeping only those that raise the
/// rank, until the span reaches `target` dimensions.
fn extend_to_dim<R: RngCore + ?Sized>(
    base: &Subspace,
    target: usize,
    rng: &mut R,
) -> Option<Subspace> {
    if base.dim() > target || target > base.ambient_dim() {
        return None;
    }
    let field = base.field();
    let n = base.ambient_dim();
    let mut current = base.clone();
    let mut attempts = 0u32;
    while current.dim() < target {
        attempts += 1;
        if attempts > RETRY_BUDGET * (target as u32 + 1) {
            return None;
        }
        let candidate = Subspace::from_spanning(
            &current
                .basis()
                .stack(&Matrix::random(1, n, field, rng))
                .expect("same ambient width"),
        );
        if candidate.dim() > current.dim() {
            current = candidate;
        }
    }
    Some(current)
}

/// Hashes an identity string to a lattice element, publicly computable from
/// the parameters alone.
///
/// A ChaCha stream keyed by `SHA-256(params || id || counter)` supplies the
/// candidate vectors; the counter advances while the candidate misses its
/// target dimension, contains `d`, or collides with `P`.
pub fn h1(params: &PublicParams, id: &[u8]) -> Result<Subspace> {
    h1_with_attempts(params, id).map(|(q, _)| q)
}

pub(crate) fn h1_with_attempts(params: &PublicParams, id: &[u8]) -> Result<(Subspace, u32)> {
    let policy = params.policy();
    let field = policy.field();
    let n = policy.ambient_dim();
    let (lo, hi) = policy.q_dims();
    let body = params.canonical_bytes();
    for counter in 0..RETRY_BUDGET {
        let mut stream = rng::keyed_rng(b"modlat/h1", &[&body, id, &counter.to_le_bytes()]);
        let target = rng::uniform_range(&mut stream, lo as u64, hi as u64) as usize;
        let q = Subspace::random_span(target, field, n, &mut stream);
        if q.dim() != target {
            continue;
        }
        if params.d().leq(&q)? {
            continue;
        }
        if q == *params.p() {
            continue;
        }
        return Ok((q, counter + 1));
    }
    Err(Error::H1Failure(RETRY_BUDGET))
}

/// Issues the private key `S_ID = s . H1(ID)`.
///
/// Refuses once the issuance bound is reached, and rejects identities whose
/// hash is contained in the master key or meets it trivially; both
/// degeneracies would leak structure or produce an unusable key.
pub fn extract(params: &PublicParams, msk: &mut MasterKey, id: &[u8]) -> Result<PrivateKey> {
    let bound = params.policy().issuance_bound();
    if msk.issued >= bound {
        return Err(Error::IssuanceExhausted(bound));
    }
    let q_id = h1(params, id)?;
    if q_id.leq(&msk.s)? {
        return Err(Error::ExtractionDegenerate(
            "identity space is contained in the master key",
        ));
    }
    let s_id = msk.s.meet(&q_id)?;
    if s_id.is_zero() {
        return Err(Error::ExtractionDegenerate(
            "private key collapsed to the zero space",
        ));
    }
    msk.issued += 1;
    Ok(PrivateKey {
        id: id.to_vec(),
        s_id,
    })
}

pub fn encrypt<R: RngCore + ?Sized>(
    params: &PublicParams,
    id: &[u8],
    message: &[u8],
    rng: &mut R,
) -> Result<Ciphertext> {
    encrypt_traced(params, id, message, rng).map(|(ct, _)| ct)
}

/// Encryption that also returns the intermediate pairing values.
///
/// The ephemeral space is resampled while it violates `not (P <= r)` or
/// `not (Q_ID <= r)`, and whenever the session key degenerates to `O` or to
/// `d` (either value would make the mask predictable).
pub fn encrypt_traced<R: RngCore + ?Sized>(
    params: &PublicParams,
    id: &[u8],
    message: &[u8],
    rng: &mut R,
) -> Result<(Ciphertext, EncryptTrace)> {
    let bits = params.policy().message_bits();
    check_message(message, bits)?;
    let q_id = h1(params, id)?;
    for _ in 0..RETRY_BUDGET {
        let Some(r) = sample_above(params.policy(), &params.d, rng) else {
            continue;
        };
        if params.p.leq(&r)? || q_id.leq(&r)? {
            continue;
        }
        let q_meet_r = q_id.meet(&r)?;
        let joined = q_meet_r.join(&params.p_pub)?;
        let session_key = params.d.meet(&joined)?;
        if session_key.is_zero() || session_key == params.d {
            continue;
        }
        let u = r.meet(&params.p)?;
        let v = xor_masked(message, &h2(&session_key, bits), bits);
        let ct = Ciphertext {
            u,
            v,
            bits,
            header: params.header_hex(),
        };
        let trace = EncryptTrace {
            q_meet_r,
            joined_with_p_pub: joined,
            session_key,
        };
        return Ok((ct, trace));
    }
    Err(Error::EncryptionFailure(RETRY_BUDGET))
}

/// Recovers `V xor H2(e_d(S_ID, U))`.
pub fn decrypt(params: &PublicParams, key: &PrivateKey, ct: &Ciphertext) -> Result<Vec<u8>> {
    if ct.header != params.header_hex() {
        return Err(Error::HeaderMismatch);
    }
    let bits = params.policy().message_bits();
    if ct.bits != bits || ct.v.len() != bits.div_ceil(8) {
        return Err(Error::Parse(
            "ciphertext payload length disagrees with the policy".into(),
        ));
    }
    let session_key = pair_subspaces(&params.d, &key.s_id, &ct.u)?;
    Ok(xor_masked(&ct.v, &h2(&session_key, bits), bits))
}

/// Hashes a lattice element to `out_bits` bits: SHA-256 in counter mode over
/// the canonical serialization, concatenated and truncated. Bits beyond
/// `out_bits` in the last byte are cleared (low-bit-first convention).
pub fn h2(k: &Subspace, out_bits: usize) -> Vec<u8> {
    let n_bytes = out_bits.div_ceil(8);
    let ser = k.canonical_bytes();
    let mut out = Vec::with_capacity(n_bytes + 32);
    let mut counter: u32 = 0;
    while out.len() < n_bytes {
        let mut h = Sha256::new();
        h.update(&ser);
        h.update(counter.to_le_bytes());
        out.extend_from_slice(&h.finalize());
        counter += 1;
    }
    out.truncate(n_bytes);
    mask_tail(&mut out, out_bits);
    out
}

fn check_message(message: &[u8], bits: usize) -> Result<()> {
    let expected_bytes = bits.div_ceil(8);
    if message.len() != expected_bytes {
        return Err(Error::MessageLength {
            expected_bits: bits,
            expected_bytes,
            got_bytes: message.len(),
        });
    }
    if bits % 8 != 0 {
        let unused = !((1u8 << (bits % 8)) - 1);
        if message[expected_bytes - 1] & unused != 0 {
            return Err(Error::Precondition(format!(
                "message carries data beyond its {bits}-bit length"
            )));
        }
    }
    Ok(())
}

fn xor_masked(a: &[u8], b: &[u8], bits: usize) -> Vec<u8> {
    debug_assert_eq!(a.len(), b.len());
    let mut out: Vec<u8> = a.iter().zip(b).map(|(&x, &y)| x ^ y).collect();
    mask_tail(&mut out, bits);
    out
}

fn mask_tail(bytes: &mut [u8], bits: usize) {
    if bits % 8 != 0 {
        if let Some(last) = bytes.last_mut() {
            *last &= (1u8 << (bits % 8)) - 1;
        }
    }
}

fn hex_encode(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
