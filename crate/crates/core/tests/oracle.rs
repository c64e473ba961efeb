//! Closed forms versus adaptive quadrature of their defining integrals.
//!
//! Every analytic expression exported by the crate is re-derived here from
//! the marginal SNR law (pdf/ccdf) by direct numerical integration, then
//! compared against the closed form. The integration path never goes through
//! the expressions under test.

use cogrelay::*;

fn oracle_spec() -> QuadratureSpec {
    QuadratureSpec::new(1e-11, 1e-300, 4000).unwrap()
}

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-300)
}

fn link(lambda: f64, mu: f64) -> LinkStatistics {
    LinkStatistics::new(lambda, mu).unwrap()
}

/// Hop statistics in the three operating regimes.
///
/// p = exp(-mu/lambda): PTPR p < 0.01, mixed p ~ 0.5, PIPR p > 0.99.
fn regime_links() -> Vec<LinkStatistics> {
    vec![
        link(100.0, 600.0),  // PTPR, p ~ 2.5e-3
        link(1000.0, 693.0), // mixed, p ~ 0.5
        link(1e4, 50.0),     // PIPR, p ~ 0.995
    ]
}

fn oracle_ccdf_source_selected(hops: &HopPair, rho: f64, x: f64) -> f64 {
    let spec = oracle_spec();
    quadrature(
        |s| {
            snr_pdf(&hops.source, s).unwrap() * (1.0 - snr_ccdf(&hops.relay, rho * s).unwrap())
        },
        x,
        f64::INFINITY,
        &spec,
    )
    .unwrap()
}

fn oracle_ccdf_relay_selected(hops: &HopPair, rho: f64, x: f64) -> f64 {
    let spec = oracle_spec();
    quadrature(
        |r| {
            snr_pdf(&hops.relay, r).unwrap() * (1.0 - snr_ccdf(&hops.source, r / rho).unwrap())
        },
        x,
        f64::INFINITY,
        &spec,
    )
    .unwrap()
}

fn oracle_rate_source(hops: &HopPair, rho: f64) -> f64 {
    let spec = oracle_spec();
    quadrature(
        |s| {
            s.ln_1p() * std::f64::consts::LOG2_E
                * snr_pdf(&hops.source, s).unwrap()
                * (1.0 - snr_ccdf(&hops.relay, rho * s).unwrap())
        },
        0.0,
        f64::INFINITY,
        &spec,
    )
    .unwrap()
}

fn oracle_rate_relay(hops: &HopPair, rho: f64) -> f64 {
    let spec = oracle_spec();
    quadrature(
        |r| {
            r.ln_1p() * std::f64::consts::LOG2_E
                * snr_pdf(&hops.relay, r).unwrap()
                * (1.0 - snr_ccdf(&hops.source, r / rho).unwrap())
        },
        0.0,
        f64::INFINITY,
        &spec,
    )
    .unwrap()
}

fn oracle_hop_mean(link: &LinkStatistics) -> f64 {
    let spec = oracle_spec();
    quadrature(
        |x| x.ln_1p() * std::f64::consts::LOG2_E * snr_pdf(link, x).unwrap(),
        0.0,
        f64::INFINITY,
        &spec,
    )
    .unwrap()
}

fn oracle_cubr(hops: &HopPair) -> f64 {
    let spec = oracle_spec();
    0.5 * std::f64::consts::LOG2_E
        * quadrature(
            |x| {
                snr_ccdf(&hops.source, x).unwrap() * snr_ccdf(&hops.relay, x).unwrap()
                    / (1.0 + x)
            },
            0.0,
            f64::INFINITY,
            &spec,
        )
        .unwrap()
}

/// Parameter points covering every regime pair, both branch conditions and a
/// spread of selection thresholds. The equal-branch rows set mu_r = rho mu_s
/// exactly.
fn grid() -> Vec<(HopPair, f64)> {
    let mut points = Vec::new();
    let rhos = [0.5, 1.0, 2.3];
    for source in regime_links() {
        for relay in regime_links() {
            for rho in rhos {
                points.push((HopPair::new(source, relay), rho));
            }
        }
    }
    // Equal-branch rows: mu_r = rho mu_s in each regime pairing.
    for (ls, mus, lr, rho) in [
        (100.0, 600.0, 150.0, 0.5),
        (1000.0, 693.0, 800.0, 1.0),
        (1e4, 50.0, 2e4, 2.0),
        (1000.0, 693.0, 1e4, 0.25),
    ] {
        points.push((HopPair::new(link(ls, mus), link(lr, rho * mus)), rho));
    }
    points
}

#[test]
fn joint_ccdfs_match_defining_integrals() {
    let policy = BranchPolicy::default();
    let mut checked = 0;
    for (hops, rho) in grid() {
        for x in [0.0, 1.2, 9.5] {
            let want = oracle_ccdf_source_selected(&hops, rho, x);
            let got = ccdf_source_selected(&hops, rho, x, &policy).unwrap();
            assert!(
                rel_err(got, want) < 1e-8,
                "source-selected CCDF rho={rho} x={x} hops={hops:?}: {got} vs {want}"
            );
            let want = oracle_ccdf_relay_selected(&hops, rho, x);
            let got = ccdf_relay_selected(&hops, rho, x, &policy).unwrap();
            assert!(
                rel_err(got, want) < 1e-8,
                "relay-selected CCDF rho={rho} x={x} hops={hops:?}: {got} vs {want}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 20, "grid too small: {checked}");
}

#[test]
fn hop_rates_match_defining_integrals() {
    let policy = BranchPolicy::default();
    for (hops, rho) in grid() {
        let want = oracle_rate_source(&hops, rho);
        let got = rate_source_hop(&hops, rho, &policy).unwrap();
        assert!(
            rel_err(got, want) < 1e-7,
            "source-hop rate rho={rho} hops={hops:?}: {got} vs {want}"
        );
        let want = oracle_rate_relay(&hops, rho);
        let got = rate_relay_hop(&hops, rho, &policy).unwrap();
        assert!(
            rel_err(got, want) < 1e-7,
            "relay-hop rate rho={rho} hops={hops:?}: {got} vs {want}"
        );
    }
}

#[test]
fn conventional_rates_match_defining_integrals() {
    let policy = BranchPolicy::default();
    for (hops, _) in grid() {
        let want = oracle_cubr(&hops);
        let got = rate_cubr(&hops, &policy).unwrap();
        assert!(
            rel_err(got, want) < 1e-8,
            "CUBR hops={hops:?}: {got} vs {want}"
        );

        let mean_s = oracle_hop_mean(&hops.source);
        let mean_r = oracle_hop_mean(&hops.relay);
        let got_mean = hop_mean_rate(&hops.source).unwrap();
        assert!(
            rel_err(got_mean, mean_s) < 1e-8,
            "hop mean {got_mean} vs {mean_s}"
        );
        let got = rate_cbr(&hops).unwrap();
        assert!(
            rel_err(got, 0.5 * mean_s.min(mean_r)) < 1e-8,
            "CBR hops={hops:?}"
        );
    }
}

#[test]
fn appendix_terms_match_defining_integrands() {
    // T2's defining integral is exactly zero at x = 0, so the oracle needs an
    // absolute floor alongside the relative target.
    let spec = QuadratureSpec::new(1e-11, 1e-13, 4000).unwrap();
    let policy = BranchPolicy::default();
    // Distinct-branch and equal-branch points.
    let cases = [
        (HopPair::new(link(1000.0, 693.0), link(500.0, 80.0)), 1.3),
        (HopPair::new(link(100.0, 600.0), link(1e4, 50.0)), 0.7),
        (HopPair::new(link(1000.0, 693.0), link(800.0, 693.0)), 1.0),
        (HopPair::new(link(300.0, 20.0), link(900.0, 44.0)), 2.2),
    ];
    for (hops, rho) in cases {
        let (ls, mus) = (hops.source.lambda(), hops.source.mu());
        let (lr, mur) = (hops.relay.lambda(), hops.relay.mu());
        let l_rho = lambda_rho(&hops, rho).unwrap();
        for x in [0.0, 2.1, 15.0] {
            let terms = appendix_terms(&hops, rho, x, &policy).unwrap();
            let decay = |s: f64| (-rho * s / l_rho).exp();
            let quad =
                |f: &dyn Fn(f64) -> f64| quadrature(f, x, f64::INFINITY, &spec).unwrap();

            let t1 = quad(&|s| decay(s) / ls);
            let t2 = quad(&|s| {
                rho / l_rho
                    * (1.0 - mus / (s + mus) - l_rho * mus / (rho * (s + mus) * (s + mus)))
                    * decay(s)
            });
            let t3 = quad(&|s| rho / lr * (1.0 - mus / (s + mus)) * decay(s));
            let t4 = quad(&|s| (1.0 - mur / (rho * s + mur)) * decay(s) / ls);
            let t5 = quad(&|s| {
                (1.0 - mus / (s + mus) - ls * mus / ((s + mus) * (s + mus)))
                    * mur
                    / (rho * s + mur)
                    * decay(s)
                    / ls
            });
            let t6 = quad(&|s| rho * mus / ((s + mus) * (rho * s + mur)) * decay(s));

            for (name, got, want) in [
                ("T1", terms.t1, t1),
                ("T2", terms.t2, t2),
                ("T3", terms.t3, t3),
                ("T4", terms.t4, t4),
                ("T5", terms.t5, t5),
                ("T6", terms.t6, t6),
            ] {
                assert!(
                    rel_err(got, want) < 1e-8 || (got - want).abs() < 1e-12,
                    "{name} rho={rho} x={x}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn rate_equals_integrated_selected_ccdf() {
    // CCDF and rate layers against each other: the hop rate must equal
    // log2(e) int ccdf_source_selected(x)/(1+x) dx.
    let spec = QuadratureSpec::new(1e-10, 1e-300, 4000).unwrap();
    let policy = BranchPolicy::default();
    for (hops, rho) in [
        (HopPair::new(link(1000.0, 693.0), link(500.0, 80.0)), 1.3),
        (HopPair::new(link(100.0, 600.0), link(1e4, 50.0)), 0.7),
        (HopPair::new(link(1000.0, 693.0), link(800.0, 693.0)), 1.0),
    ] {
        let integrated = std::f64::consts::LOG2_E
            * quadrature(
                |x| ccdf_source_selected(&hops, rho, x, &policy).unwrap() / (1.0 + x),
                0.0,
                f64::INFINITY,
                &spec,
            )
            .unwrap();
        let direct = rate_source_hop(&hops, rho, &policy).unwrap();
        assert!(
            rel_err(direct, integrated) < 1e-7,
            "rho={rho}: {direct} vs {integrated}"
        );
    }
}

#[test]
fn forced_ptpr_reduces_to_non_cognitive_forms() {
    // p_s = p_r = 0: every scheme must collapse to the exponential-SNR
    // expressions, checked against quadrature over the reduced integrands.
    let spec = oracle_spec();
    let policy = BranchPolicy::default();
    let force = |lambda: f64, mu: f64| {
        LinkStatistics::with_violation_probability(lambda, mu, 0.0).unwrap()
    };
    let hops = HopPair::new(force(900.0, 47.0), force(400.0, 12.0));
    let (ls, lr) = (900.0, 400.0);

    for rho in [0.6, 1.0, 1.9] {
        let l_rho = lambda_rho(&hops, rho).unwrap();
        let reduced = std::f64::consts::LOG2_E
            * quadrature(
                |x| {
                    ((-x / ls).exp() - l_rho / (rho * ls) * (-rho * x / l_rho).exp())
                        / (1.0 + x)
                },
                0.0,
                f64::INFINITY,
                &spec,
            )
            .unwrap();
        let got = rate_source_hop(&hops, rho, &policy).unwrap();
        assert!(
            rel_err(got, reduced) < 1e-8,
            "rho={rho}: {got} vs {reduced}"
        );
    }

    let le = lambda_e(&hops);
    let cubr_reduced = 0.5
        * std::f64::consts::LOG2_E
        * quadrature(
            |x| (-x / le).exp() / (1.0 + x),
            0.0,
            f64::INFINITY,
            &spec,
        )
        .unwrap();
    let got = rate_cubr(&hops, &policy).unwrap();
    assert!(rel_err(got, cubr_reduced) < 1e-8, "{got} vs {cubr_reduced}");

    let cbr_reduced = 0.5
        * std::f64::consts::LOG2_E
        * quadrature(
            |x| (-x / lr).exp() / (1.0 + x),
            0.0,
            f64::INFINITY,
            &spec,
        )
        .unwrap();
    let got = rate_cbr(&hops).unwrap();
    assert!(rel_err(got, cbr_reduced) < 1e-8, "{got} vs {cbr_reduced}");
}

#[test]
fn mu_one_limit_path_matches_quadrature() {
    // The perturbation average for the removable mu = 1 singularity,
    // validated against the defining integral.
    let policy = BranchPolicy::default();
    let hops = HopPair::new(link(500.0, 1.0), link(700.0, 9.0));
    let got = rate_source_hop(&hops, 1.3, &policy).unwrap();
    let want = oracle_rate_source(&hops, 1.3);
    assert!(rel_err(got, want) < 1e-6, "{got} vs {want}");

    let got = hop_mean_rate(&hops.source).unwrap();
    let want = oracle_hop_mean(&hops.source);
    assert!(rel_err(got, want) < 1e-6, "{got} vs {want}");

    // Both hops at mu = 1 (also the equal branch for rho = 1).
    let both = HopPair::new(link(500.0, 1.0), link(700.0, 1.0));
    let got = rate_cubr(&both, &policy).unwrap();
    let want = oracle_cubr(&both);
    assert!(rel_err(got, want) < 1e-6, "{got} vs {want}");
}

#[test]
fn i_and_j_family_grid_against_quadrature() {
    // mu/lambda sweeping 1e-3 .. 1e3 (>= 50 points overall).
    let spec = oracle_spec();
    let mut checked = 0;
    for lambda in [0.5, 5.0, 80.0, 1500.0] {
        for ratio in [1e-3, 1e-2, 0.1, 0.7, 1.0, 3.0, 10.0, 100.0, 1e3] {
            let mu = ratio * lambda;
            let rp_mu = RealPositive::new(mu).unwrap();
            let rp_l = RealPositive::new(lambda).unwrap();

            for n in [1u32, 2] {
                let want = quadrature(
                    |s| mu.powi(n as i32 - 1) / (s + mu).powi(n as i32) * (-s / lambda).exp(),
                    0.0,
                    f64::INFINITY,
                    &spec,
                )
                .unwrap()
                    * std::f64::consts::LOG2_E;
                let got = integral_i_rate(n, rp_mu, rp_l).unwrap();
                assert!(
                    rel_err(got, want) < 1e-8,
                    "I_{n}({mu},{lambda}): {got} vs {want}"
                );
            }

            let want = integral_j_quadrature(rp_mu, rp_l).unwrap();
            let got = integral_j(rp_mu, rp_l).unwrap();
            assert!(
                rel_err(got, want) < 1e-8,
                "J({mu},{lambda}): {got} vs {want}"
            );
            checked += 1;
        }
    }
    assert!(checked >= 36);
}
