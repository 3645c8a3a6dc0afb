//! Criterion tags embedded in every report, one per formula used.

pub const HINF_H2_EXACT: &str = "hinf-h2 exact: ||W||_e = mu_2(phi(E))^(1/2)";
pub const HINF_H2_COMPACT: &str = "hinf-h2 compactness: compact iff psi in H^2 and sigma(E) = 0";
pub const HINF_HQ_BRACKET: &str = "hinf-hq bracket (q > 1): mu_q(phi(E))^(1/q)/2 <= ||W||_e <= 2 mu_q(phi(E))^(1/q)";
pub const HP_HQ_LOWER: &str = "hp-hq lower bound (1 < p < inf, n = 1): ||W||_e >= mu_q(phi(E))^(1/q)";
pub const HP_HQ_INTERP_UPPER: &str =
    "hp-hq interpolation upper bound (1 < q < p, r > q): ||W||_e <= ||P|| ||W||_(p,r) sigma(E)^((r-q)/(qr))";
pub const HP_HINF_BOUNDED: &str = "hp-hinf boundedness: bounded iff sup |psi(z)|/(1-|phi(z)|^2)^(n/p) < inf";
pub const HP_HINF_BRACKET: &str = "hp-hinf bracket: L <= ||W||_e <= 2L, L = lim_(delta->0) sup_(dist(phi(z),S) < delta) |psi(z)|/(1-|phi(z)|^2)^(n/p)";
pub const HP_HINF_COMPACT: &str = "hp-hinf compactness: compact iff L = 0";
pub const EMPTY_REGION: &str = "empty boundary region (||phi||_inf < 1 - delta): the limit L is set to 0";
pub const TRUNCATION_DECAY: &str = "truncation decay: ||Q_k W(g^m)||_2 -> 0 as m -> inf for inner g";
pub const CARLESON_BOX: &str = "beta-Carleson box condition: mu(S_h(xi)) <= M h^(n beta)";
pub const CARLESON_VANISHING: &str = "vanishing beta-Carleson: sup_xi mu(S_h(xi))/h^(n beta) -> 0 as h -> 0";
pub const BEREZIN_BOUNDED: &str =
    "berezin boundedness (p <= q): sup_z int (1-|z|^2)^(nq/p)/|1-<w,z>|^(2nq/p) dmu(w) < inf";
pub const BEREZIN_COMPACT: &str = "berezin compactness (p <= q): compact iff the berezin transform -> 0 at the sphere";
pub const BEREZIN_LOWER: &str = "berezin lower bound (p <= q): ||W||_e >= limsup_(|w|->1) (berezin transform)^(1/q)";
pub const EMBEDDING: &str = "carleson embedding: int |f|^q dmu <= C ||f||_p^q";
pub const BOUNDARY_MASS: &str = "bounded with p < q implies mu_q(phi(E)) = 0";
pub const CHANGE_OF_VARIABLES: &str = "change of variables: int g dmu_(psi,phi,q) = int |psi|^q (g o phi) dsigma";
pub const NORM_SUBORDINATION: &str =
    "subordination bound (n = 1): ||W||_e <= ||W|| <= ||psi||_inf ((1 + |phi(0)|)/(1 - |phi(0)|))^(1/p) on H^p";
