//! Checked applications of the two transfer results for a-Massey products:
//! blow-ups keep a nontrivial triple product under a degree bound, resolutions keep
//! every nontrivial product.

use crate::massey::{AMasseyResult, Status};

use super::blowup::BlowupData;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterCheck {
    pub center: String,
    pub codim_half: u32,
    /// Largest `2|a| + |b_i| + |b_j|` over all pairs.
    pub worst: u32,
    /// `2k + 2`.
    pub bound: u32,
    pub degree_bound_holds: bool,
    /// `H^odd(N) = 0`, `k > 5` and `N` carries a certified triple product.
    pub center_clause_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupTransferReport {
    pub triple: bool,
    pub certified: bool,
    pub centers: Vec<CenterCheck>,
    pub transfers: bool,
    pub trail: Vec<String>,
}

fn half(x: u32) -> String {
    if x % 2 == 0 {
        format!("{}", x / 2)
    } else {
        format!("{x}/2")
    }
}

/// Blow-up transfer: `M` has a certified nontrivial triple a-product and, for every
/// center, `|a| + (|b_i| + |b_j|)/2 <= k + 1`. The alternative clause uses a certified
/// triple product on the center itself (`center_products[c]`).
pub fn blowup_transfer_hypothesis(
    data: &BlowupData,
    product: &AMasseyResult,
    center_products: &[Option<&AMasseyResult>],
) -> BlowupTransferReport {
    let triple = product.bs.len() == 3;
    let certified = product.certificate == Status::NontrivialCertified;
    let a = product.a.degree;
    let bmax = product.bs.iter().map(|b| b.degree).max().unwrap_or(0);
    let worst = 2 * a + 2 * bmax;
    let mut trail = vec![format!(
        "product <a; b_1, ..., b_{}> with |a| = {a}, status {}",
        product.bs.len(),
        product.certificate.as_str()
    )];
    let mut centers = Vec::new();
    for (ci, c) in data.centers.iter().enumerate() {
        let k = c.codim_half;
        let bound = 2 * k + 2;
        let degree_bound_holds = worst <= bound;
        trail.push(format!(
            "center {}: |a| + (|b_i| + |b_j|)/2 <= {} + {} = {}, need <= k + 1 = {}: {}",
            c.name,
            a,
            half(2 * bmax),
            half(worst),
            k + 1,
            if degree_bound_holds { "holds" } else { "fails" }
        ));
        let odd_free = (1..=c.ring.top()).step_by(2).all(|d| c.ring.dim(d) == 0);
        let local = center_products.get(ci).copied().flatten();
        let local_ok = local.is_some_and(|p| p.bs.len() == 3 && p.certificate == Status::NontrivialCertified);
        let center_clause_holds = odd_free && k > 5 && local_ok;
        if local.is_some() {
            trail.push(format!(
                "center {}: H^odd(N) = 0 {}, k = {k} > 5 {}, triple product on N {}",
                c.name,
                if odd_free { "holds" } else { "fails" },
                if k > 5 { "holds" } else { "fails" },
                if local_ok { "certified" } else { "not certified" }
            ));
        }
        centers.push(CenterCheck { center: c.name.clone(), codim_half: k, worst, bound, degree_bound_holds, center_clause_holds });
    }
    let base_ok = triple && certified;
    let transfers = centers.iter().all(|c| (base_ok && c.degree_bound_holds) || c.center_clause_holds);
    trail.push(if transfers {
        "TRANSFER: the blow-up has a nontrivial triple a-product".to_string()
    } else {
        "NO-TRANSFER: hypotheses unmet (this does not show the product dies)".to_string()
    });
    BlowupTransferReport { triple, certified, centers, transfers, trail }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferReport {
    pub status: Status,
    pub transfers: bool,
    pub trail: Vec<String>,
}

/// Resolution transfer: unconditional once the product is certified nontrivial.
pub fn resolution_transfer_report(product: &AMasseyResult) -> TransferReport {
    let status = product.certificate;
    let transfers = status == Status::NontrivialCertified;
    let mut trail = vec![format!("product on the orbifold has status {}", status.as_str())];
    trail.push(if transfers {
        "TRANSFER: resolving isolated singular points keeps a nontrivial a-product".to_string()
    } else {
        "NO-TRANSFER: the product is not certified nontrivial on the orbifold".to_string()
    });
    TransferReport { status, transfers, trail }
}
