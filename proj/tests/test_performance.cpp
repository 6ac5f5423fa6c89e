// SPDX-License-Identifier: Apache-2.0
//
// nafdsim  c++ system-level simulator for cell-free massive MIMO networks
// with network-assisted full-duplex operation
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "nafdsim/assignment.hpp"
#include "nafdsim/channel.hpp"
#include "nafdsim/performance.hpp"
#include "nafdsim/precoding.hpp"
#include "nafdsim/rng.hpp"
#include "nafdsim/topology.hpp"

using namespace nafd;

namespace
{

arma::mat scalar_mat(double v)
{
    arma::mat m(1, 1);
    m(0, 0) = v;
    return m;
}

arma::mat col_mat(double v0, double v1)
{
    arma::mat m(2, 1);
    m(0, 0) = v0;
    m(1, 0) = v1;
    return m;
}

// Hand-built single-link model: one AP, one DL UE, perfect estimates, chosen
// so every closed-form term can be evaluated by hand.
LargeScaleModel dl_toy_model()
{
    LargeScaleModel ls;
    ls.beta_dl = scalar_mat(2.0);
    ls.gamma_dl = scalar_mat(2.0);
    ls.beta_ul.set_size(1, 0);
    ls.gamma_ul.set_size(1, 0);
    ls.beta_du.set_size(1, 0);
    ls.beta_ap = scalar_mat(1.0e5);
    ls.si_variance = arma::vec{1.0e5};
    ls.tau_t = 10.0;
    ls.tau_c = 200.0;
    return ls;
}

LargeScaleModel ul_toy_model()
{
    LargeScaleModel ls;
    ls.beta_dl.set_size(1, 0);
    ls.gamma_dl.set_size(1, 0);
    ls.beta_ul = scalar_mat(2.0);
    ls.gamma_ul = scalar_mat(2.0);
    ls.beta_du.set_size(0, 1);
    ls.beta_ap = scalar_mat(1.0e5);
    ls.si_variance = arma::vec{1.0e5};
    ls.tau_t = 10.0;
    ls.tau_c = 200.0;
    return ls;
}

LargeScaleModel random_model(std::size_t m, std::size_t kd, std::size_t ku, std::uint64_t seed)
{
    TopologyConfig tcfg;
    tcfg.n_aps = m;
    tcfg.n_dl_ues = kd;
    tcfg.n_ul_ues = ku;
    ChannelConfig ccfg;
    ccfg.rho_d = ccfg.rho_u = ccfg.rho_t = 1.585e11;
    ccfg.tau_t = double(kd + ku);
    ccfg.si_over_noise_db = 50.0;
    return draw_large_scale(generate_topology(tcfg, seed), ccfg, seed);
}

PowerAllocation default_power(const LargeScaleModel &ls, const GroupingAssignment &grouping,
                              const DuplexAssignment &duplex)
{
    return power_rule_fractional(ls, grouping, duplex, -0.5, 1.585e11, 1.585e11);
}

} // namespace

TEST_CASE("single-link transmit side matches the hand computation")
{
    const LargeScaleModel ls = dl_toy_model();
    const GroupingAssignment grouping = group_ues(ls, 0.0, 4); // pure maximum ratio
    const DuplexAssignment duplex = all_on_duplex(Structure::FD, 1);
    PowerAllocation power;
    power.theta = scalar_mat(1.0 / std::sqrt(8.0)); // full budget: theta^2 * N * gamma = 1
    power.varsigma.set_size(0);
    power.alpha.set_size(1, 0);
    power.rho_d = 3.0;
    power.rho_u = 3.0;

    const std::vector<UeTerms> dl = dl_se_closed_form(ls, grouping, duplex, power);
    REQUIRE(dl.size() == 1);
    // desired = rho_d * (theta * N * gamma)^2, fluctuation = rho_d * theta^2 * N * gamma * beta
    CHECK(dl[0].desired_power == Catch::Approx(24.0).epsilon(1e-12));
    CHECK(dl[0].beam_uncertainty == Catch::Approx(6.0).epsilon(1e-12));
    CHECK(dl[0].multiuser == 0.0);
    CHECK(dl[0].cross_link == 0.0);
    CHECK(dl[0].noise == 1.0);
    CHECK(dl[0].prelog == Catch::Approx(0.95).epsilon(1e-12));
    CHECK(dl[0].se == Catch::Approx(0.95 * std::log2(1.0 + 24.0 / 7.0)).epsilon(1e-12));
}

TEST_CASE("single-link receive side matches the hand computation")
{
    const LargeScaleModel ls = ul_toy_model();
    const GroupingAssignment grouping = group_ues(ls, 0.0, 4);
    const DuplexAssignment duplex = nafd_duplex({0}); // the one AP listens
    PowerAllocation power;
    power.theta.set_size(1, 0);
    power.varsigma = arma::vec{1.0};
    power.alpha = scalar_mat(1.0);
    power.rho_d = 3.0;
    power.rho_u = 3.0;

    const std::vector<UeTerms> ul = ul_se_closed_form(ls, grouping, duplex, power);
    REQUIRE(ul.size() == 1);
    // desired = rho_u * (alpha * N * gamma)^2 = 192, fluctuation = 48, noise = alpha^2 * N * gamma = 8
    CHECK(ul[0].desired_power == Catch::Approx(192.0).epsilon(1e-12));
    CHECK(ul[0].beam_uncertainty == Catch::Approx(48.0).epsilon(1e-12));
    CHECK(ul[0].multiuser == 0.0);
    CHECK(ul[0].cross_link == 0.0);
    CHECK(ul[0].noise == Catch::Approx(8.0).epsilon(1e-12));
    CHECK(ul[0].se == Catch::Approx(0.95 * std::log2(1.0 + 24.0 / 7.0)).epsilon(1e-12));
}

TEST_CASE("Monte-Carlo estimate agrees with the single-link closed form")
{
    const LargeScaleModel ls = dl_toy_model();
    const GroupingAssignment grouping = group_ues(ls, 0.0, 4);
    const DuplexAssignment duplex = all_on_duplex(Structure::FD, 1);
    PowerAllocation power;
    power.theta = scalar_mat(1.0 / std::sqrt(8.0));
    power.varsigma.set_size(0);
    power.alpha.set_size(1, 0);
    power.rho_d = 3.0;
    power.rho_u = 3.0;

    const SEReport mc = mc_estimate_terms(ls, grouping, duplex, power, 5000, 11, 2);
    REQUIRE(mc.dl.size() == 1);
    CHECK(mc.dl[0].desired_power == Catch::Approx(24.0).epsilon(0.05));
    CHECK(mc.dl[0].beam_uncertainty == Catch::Approx(6.0).epsilon(0.10));
    CHECK(mc.dl[0].noise == 1.0);
}

TEST_CASE("zero transmit power yields zero downlink spectral efficiency")
{
    const LargeScaleModel ls = random_model(3, 2, 1, 8);
    const GroupingAssignment grouping = group_ues(ls, 50.0, 4);
    const DuplexAssignment duplex = all_on_duplex(Structure::FD, 3);
    PowerAllocation power = default_power(ls, grouping, duplex);
    power.theta.zeros();
    const std::vector<UeTerms> dl = dl_se_closed_form(ls, grouping, duplex, power);
    for (const UeTerms &t : dl)
    {
        CHECK(t.desired_power == 0.0);
        CHECK(t.se == 0.0);
    }
}

TEST_CASE("half-duplex operation has no cross-direction leakage and split prelogs")
{
    const LargeScaleModel ls = random_model(4, 2, 2, 9);
    const GroupingAssignment grouping = group_ues(ls, 50.0, 4);
    const DuplexAssignment fd = all_on_duplex(Structure::FD, 4);
    const DuplexAssignment hd = all_on_duplex(Structure::HD, 4, 0.3);
    const PowerAllocation power = default_power(ls, grouping, fd);

    const SEReport rfd = closed_form_report(ls, grouping, fd, power);
    const SEReport rhd = closed_form_report(ls, grouping, hd, power);
    const double overhead = 1.0 - ls.tau_t / ls.tau_c;
    for (const UeTerms &t : rhd.dl)
    {
        CHECK(t.cross_link == 0.0);
        CHECK(t.prelog == Catch::Approx(overhead * 0.3).epsilon(1e-12));
    }
    for (const UeTerms &t : rhd.ul)
    {
        CHECK(t.cross_link == 0.0);
        CHECK(t.prelog == Catch::Approx(overhead * 0.7).epsilon(1e-12));
    }
    // Full duplex sees uplink-to-downlink interference on the same channel.
    for (std::size_t k = 0; k < rfd.dl.size(); k++)
    {
        CHECK(rfd.dl[k].cross_link > 0.0);
        // Same power state: in-direction terms coincide, only prelog and
        // cross-direction leakage differ.
        CHECK(rfd.dl[k].desired_power == Catch::Approx(rhd.dl[k].desired_power).epsilon(1e-12));
        CHECK(rfd.dl[k].multiuser == Catch::Approx(rhd.dl[k].multiuser).epsilon(1e-12));
    }
    for (const UeTerms &t : rfd.ul)
        CHECK(t.cross_link > 0.0); // includes residual self-interference
}

TEST_CASE("downlink cross-link term is the uplink-UE leakage sum")
{
    const LargeScaleModel ls = random_model(3, 2, 2, 10);
    const GroupingAssignment grouping = group_ues(ls, 50.0, 4);
    const DuplexAssignment duplex = all_on_duplex(Structure::FD, 3);
    PowerAllocation power = default_power(ls, grouping, duplex);
    power.varsigma = arma::vec{0.4, 0.9};
    const std::vector<UeTerms> dl = dl_se_closed_form(ls, grouping, duplex, power);
    for (std::size_t k = 0; k < dl.size(); k++)
    {
        double expect = 0.0;
        for (std::size_t l = 0; l < 2; l++)
            expect += power.rho_u * power.varsigma(l) * ls.beta_du(k, l);
        CHECK(dl[k].cross_link == Catch::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("raising uplink transmit power weakly degrades every downlink UE")
{
    const LargeScaleModel ls = random_model(4, 3, 2, 12);
    const GroupingAssignment grouping = group_ues(ls, 50.0, 4);
    const DuplexAssignment duplex = nafd_duplex({1, 0, 1, 0});
    PowerAllocation low = default_power(ls, grouping, duplex);
    PowerAllocation high = low;
    low.varsigma.fill(0.2);
    high.varsigma.fill(0.9);
    const SEReport rl = closed_form_report(ls, grouping, duplex, low);
    const SEReport rh = closed_form_report(ls, grouping, duplex, high);
    for (std::size_t k = 0; k < rl.dl.size(); k++)
        CHECK(rh.dl[k].se <= rl.dl[k].se + 1e-12);
}

TEST_CASE("stronger residual self-interference weakly degrades every uplink UE")
{
    LargeScaleModel ls = random_model(3, 2, 2, 13);
    const GroupingAssignment grouping = group_ues(ls, 50.0, 4);
    const DuplexAssignment duplex = all_on_duplex(Structure::FD, 3);
    const PowerAllocation power = default_power(ls, grouping, duplex);
    const SEReport weak_si = closed_form_report(ls, grouping, duplex, power);
    ls.si_variance *= 100.0;
    ls.beta_ap.diag() = ls.si_variance;
    const SEReport strong_si = closed_form_report(ls, grouping, duplex, power);
    for (std::size_t l = 0; l < weak_si.ul.size(); l++)
    {
        CHECK(strong_si.ul[l].se <= weak_si.ul[l].se + 1e-12);
        CHECK(strong_si.ul[l].cross_link >= weak_si.ul[l].cross_link);
    }
    // Downlink does not pass through the loop channel.
    for (std::size_t k = 0; k < weak_si.dl.size(); k++)
        CHECK(strong_si.dl[k].se == Catch::Approx(weak_si.dl[k].se).epsilon(1e-12));
}

TEST_CASE("mode vectors gate which APs contribute")
{
    const LargeScaleModel ls = random_model(2, 1, 1, 14);
    const GroupingAssignment grouping = group_ues(ls, 0.0, 4);
    const DuplexAssignment duplex = nafd_duplex({1, 0});
    PowerAllocation power = default_power(ls, grouping, duplex);
    // theta on the listening AP must be zero for the budget rule; the
    // evaluator then only sums the transmitting AP.
    CHECK(power.theta(1, 0) == 0.0);
    const SEReport r = closed_form_report(ls, grouping, duplex, power);
    // Downlink desired power comes only from AP 0.
    const double n = 4.0;
    const double amp = power.theta(0, 0) * ls.gamma_dl(0, 0) * n;
    CHECK(r.dl[0].desired_power == Catch::Approx(power.rho_d * amp * amp).epsilon(1e-12));
    // Uplink combining only at AP 1.
    const double ul_amp = power.alpha(1, 0) * ls.gamma_ul(1, 0) * n;
    CHECK(r.ul[0].desired_power == Catch::Approx(power.rho_u * power.varsigma(0) * ul_amp * ul_amp).epsilon(1e-12));
    CHECK(r.ul[0].noise == Catch::Approx(n * ls.gamma_ul(1, 0)).epsilon(1e-12));
}

TEST_CASE("duplex constraint violations are rejected")
{
    DuplexAssignment d;
    d.structure = Structure::NAFD;
    d.a = {1, 1};
    d.b = {1, 0};
    CHECK_THROWS_AS(validate_duplex(d), std::invalid_argument);
    d.structure = Structure::FD;
    d.a = {0, 1};
    d.b = {1, 1};
    CHECK_THROWS_AS(validate_duplex(d), std::invalid_argument);
    DuplexAssignment ok = all_on_duplex(Structure::HD, 2);
    ok.hd_split = 1.5;
    CHECK_THROWS_AS(validate_duplex(ok), std::invalid_argument);
    CHECK_NOTHROW(validate_duplex(nafd_duplex({1, 0})));
}

TEST_CASE("power state violations are rejected")
{
    const LargeScaleModel ls = random_model(2, 2, 1, 15);
    const GroupingAssignment grouping = group_ues(ls, 50.0, 4);
    const DuplexAssignment duplex = all_on_duplex(Structure::FD, 2);
    const PowerAllocation good = default_power(ls, grouping, duplex);
    CHECK_NOTHROW(closed_form_report(ls, grouping, duplex, good));

    PowerAllocation bad = good;
    bad.theta(0, 0) = -0.1;
    CHECK_THROWS_AS(closed_form_report(ls, grouping, duplex, bad), std::invalid_argument);

    bad = good;
    bad.theta *= 10.0; // a hundredfold budget violation
    CHECK_THROWS_AS(closed_form_report(ls, grouping, duplex, bad), std::invalid_argument);

    bad = good;
    bad.varsigma(0) = 1.5;
    CHECK_THROWS_AS(closed_form_report(ls, grouping, duplex, bad), std::invalid_argument);

    bad = good;
    bad.alpha(0, 0) = 1.2;
    CHECK_THROWS_AS(closed_form_report(ls, grouping, duplex, bad), std::invalid_argument);
}

TEST_CASE("Monte-Carlo terms do not depend on the thread count")
{
    const LargeScaleModel ls = random_model(2, 1, 1, 16);
    const GroupingAssignment grouping = group_ues(ls, 50.0, 2);
    const DuplexAssignment duplex = nafd_duplex({1, 0});
    const PowerAllocation power = default_power(ls, grouping, duplex);

    const SEReport r1 = mc_estimate_terms(ls, grouping, duplex, power, 200, 3, 1);
    const SEReport r3 = mc_estimate_terms(ls, grouping, duplex, power, 200, 3, 3);
    const SEReport r8 = mc_estimate_terms(ls, grouping, duplex, power, 200, 3, 8);
    REQUIRE(r1.dl.size() == 1);
    REQUIRE(r1.ul.size() == 1);
    auto same = [](const UeTerms &x, const UeTerms &y) {
        CHECK(x.desired_power == y.desired_power);
        CHECK(x.beam_uncertainty == y.beam_uncertainty);
        CHECK(x.multiuser == y.multiuser);
        CHECK(x.cross_link == y.cross_link);
        CHECK(x.noise == y.noise);
        CHECK(x.se == y.se);
    };
    same(r1.dl[0], r3.dl[0]);
    same(r1.dl[0], r8.dl[0]);
    same(r1.ul[0], r3.ul[0]);
    same(r1.ul[0], r8.ul[0]);
    // And on the seed alone.
    const SEReport again = mc_estimate_terms(ls, grouping, duplex, power, 200, 3, 2);
    same(r1.dl[0], again.dl[0]);
    const SEReport other = mc_estimate_terms(ls, grouping, duplex, power, 200, 4, 2);
    CHECK(other.dl[0].desired_power != r1.dl[0].desired_power);
}

TEST_CASE("serving-AP choice takes the largest gain with lower index on ties")
{
    LargeScaleModel ls;
    ls.beta_dl = col_mat(5.0, 5.0);
    ls.gamma_dl = col_mat(4.0, 4.0);
    ls.beta_ul = col_mat(1.0, 2.0);
    ls.gamma_ul = col_mat(0.5, 1.5);
    ls.beta_du.set_size(1, 1);
    ls.beta_du(0, 0) = 1e-3;
    ls.beta_ap = arma::mat{{1e5, 1e-9}, {1e-9, 1e5}};
    ls.si_variance = arma::vec{1e5, 1e5};
    ls.tau_t = 2.0;
    ls.tau_c = 200.0;
    const ServingAssignment serving = strongest_ap_assignment(ls);
    CHECK(serving.dl_serving_ap[0] == 0); // tie resolved downward
    CHECK(serving.ul_serving_ap[0] == 1); // strictly larger gain wins
}

TEST_CASE("single-AP small cell coincides with the cell-free evaluation")
{
    const LargeScaleModel ls = random_model(1, 2, 1, 18);
    const double upsilon = 50.0;
    const std::size_t n = 4;
    const ServingAssignment serving = strongest_ap_assignment(ls);
    const GroupingAssignment sc_grouping = smallcell_grouping(ls, serving, upsilon, n);
    const GroupingAssignment cf_grouping = group_ues(ls, upsilon, n);
    CHECK(arma::all(arma::vectorise(sc_grouping.strong_dl == cf_grouping.strong_dl)));
    CHECK(arma::all(arma::vectorise(sc_grouping.served_dl == cf_grouping.served_dl)));

    const DuplexAssignment duplex = all_on_duplex(Structure::FD, 1);
    const PowerAllocation power = default_power(ls, cf_grouping, duplex);
    const SEReport cf = closed_form_report(ls, cf_grouping, duplex, power);
    const SEReport sc = smallcell_se(ls, serving, power, upsilon, n);
    CHECK(sc.structure == Structure::SMALLCELL);
    REQUIRE(sc.dl.size() == cf.dl.size());
    REQUIRE(sc.ul.size() == cf.ul.size());
    for (std::size_t k = 0; k < cf.dl.size(); k++)
    {
        CHECK(sc.dl[k].se == Catch::Approx(cf.dl[k].se).epsilon(1e-12));
        CHECK(sc.dl[k].desired_power == Catch::Approx(cf.dl[k].desired_power).epsilon(1e-12));
        CHECK(sc.dl[k].cross_link == Catch::Approx(cf.dl[k].cross_link).epsilon(1e-12));
    }
    for (std::size_t l = 0; l < cf.ul.size(); l++)
        CHECK(sc.ul[l].se == Catch::Approx(cf.ul[l].se).epsilon(1e-12));
}

TEST_CASE("small cells do not beat cell-free on the transmit side at equal total power")
{
    // Paired comparison on the same realization. With more UEs than APs
    // every AP serves at least one cell member, so both networks transmit
    // at the full per-AP budget and the totals coincide without rescaling
    // (the guard below handles the rare instance where an AP sits idle).
    // Power is shared with the neutral equal-share rule on both sides so the
    // two architectures differ only in who combines coherently: the
    // cell-free side adds every AP's contribution in amplitude, the
    // small-cell side only its one serving AP. Compared per instance on the
    // worst UE and on the median UE; the claim must hold in the median over
    // 100 instances.
    const std::size_t n_instances = 100;
    const std::size_t m_aps = 8;
    const std::size_t kd = 16;
    std::size_t cf_wins_worst = 0;
    std::size_t cf_wins_median = 0;
    for (std::size_t inst = 0; inst < n_instances; inst++)
    {
        const LargeScaleModel ls = random_model(m_aps, kd, 0, 300 + inst);
        const std::size_t n = 4;
        const double upsilon = 50.0;
        const DuplexAssignment duplex = all_on_duplex(Structure::FD, m_aps);

        const ServingAssignment serving = strongest_ap_assignment(ls);
        const GroupingAssignment sc_grouping = smallcell_grouping(ls, serving, upsilon, n);
        const PowerAllocation sc_power = power_rule_fractional(ls, sc_grouping, duplex, 0.0, 1.585e11, 1.585e11);
        const SEReport sc = smallcell_se(ls, serving, sc_power, upsilon, n);

        std::size_t n_serving = 0;
        for (std::size_t m = 0; m < m_aps; m++)
            if (arma::accu(sc_grouping.served_dl.row(m)) > 0)
                n_serving++;

        const GroupingAssignment cf_grouping = group_ues(ls, upsilon, n);
        PowerAllocation cf_power = power_rule_fractional(ls, cf_grouping, duplex, 0.0, 1.585e11, 1.585e11);
        cf_power.theta *= std::sqrt(double(n_serving) / double(m_aps));
        const SEReport cf = closed_form_report(ls, cf_grouping, duplex, cf_power);

        std::vector<double> sc_se, cf_se;
        for (std::size_t k = 0; k < kd; k++)
        {
            sc_se.push_back(sc.dl[k].se);
            cf_se.push_back(cf.dl[k].se);
        }
        std::sort(sc_se.begin(), sc_se.end());
        std::sort(cf_se.begin(), cf_se.end());
        if (sc_se.front() <= cf_se.front() + 1e-12)
            cf_wins_worst++;
        if (sc_se[kd / 2] <= cf_se[kd / 2] + 1e-12)
            cf_wins_median++;
    }
    CHECK(cf_wins_worst >= n_instances / 2);
    CHECK(cf_wins_median >= n_instances / 2);
}

TEST_CASE("report reductions and serialization")
{
    const LargeScaleModel ls = random_model(3, 2, 1, 19);
    const GroupingAssignment grouping = group_ues(ls, 50.0, 4);
    const DuplexAssignment duplex = all_on_duplex(Structure::FD, 3);
    const PowerAllocation power = default_power(ls, grouping, duplex);
    const SEReport r = closed_form_report(ls, grouping, duplex, power);

    double sum = 0.0;
    for (const UeTerms &t : r.dl)
        sum += t.se;
    for (const UeTerms &t : r.ul)
        sum += t.se;
    CHECK(r.sum_se() == Catch::Approx(sum).epsilon(1e-14));
    CHECK(r.min_dl_se() <= r.dl[0].se);
    CHECK(r.min_ul_se() == Catch::Approx(r.ul[0].se).epsilon(1e-14));

    SEReport empty;
    empty.structure = Structure::FD;
    CHECK(std::isinf(empty.min_dl_se()));
    CHECK(empty.sum_se() == 0.0);

    const std::string csv = se_report_csv(r);
    std::istringstream in(csv);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "structure,ue_kind,ue_index,se,prelog,desired_power,beam_uncertainty,multiuser,cross_link,noise");
    std::size_t rows = 0;
    while (std::getline(in, line))
    {
        CHECK(line.rfind("fd,", 0) == 0);
        rows++;
    }
    CHECK(rows == 3); // two downlink UEs + one uplink UE
}
