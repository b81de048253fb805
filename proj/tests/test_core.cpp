#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>
#include <sstream>

#include "spdc/materials.hpp"
#include "spdc/quadrature.hpp"
#include "spdc/quantities.hpp"
#include "spdc/units.hpp"

using namespace spdc;

namespace {

WaveTriple ppktp() { return WaveTriple::from_signal_idler(800e-9, 1.844, 800e-9, 1.757, 1.964); }

}  // namespace

// ---------------------------------------------------------------- units

TEST(Units, ParsesValueAndTag) {
  const auto q = parse_quantity("  800 nm ");
  EXPECT_EQ(q.value, 800.0);
  EXPECT_EQ(q.unit, "nm");
  EXPECT_DOUBLE_EQ(q.si(), 800e-9);
  EXPECT_DOUBLE_EQ(parse_quantity("2.4pm/V").si(), 2.4e-12);
  EXPECT_DOUBLE_EQ(parse_quantity("1 \xC2\xB5m").si(), 1e-6);
  EXPECT_DOUBLE_EQ(parse_quantity("-3.0").si(), -3.0);
}

TEST(Units, OrdinaryFrequenciesBecomeAngular) {
  EXPECT_DOUBLE_EQ(to_si(1.0, "MHz"), 2.0 * constants::pi * 1e6);
  EXPECT_DOUBLE_EQ(to_si(5.0, "rad/s"), 5.0);
  EXPECT_DOUBLE_EQ(from_si(2.0 * constants::pi * 3e9, Unit::GHz), 3.0);
}

TEST(Units, RejectsUnknownUnitsAndGarbage) {
  EXPECT_THROW(parse_quantity("800 furlongs"), UnitError);
  EXPECT_THROW(parse_quantity("nm"), UnitError);
  EXPECT_THROW(parse_quantity(""), UnitError);
  EXPECT_THROW(parse_unit("parsec"), UnitError);
}

TEST(Units, RoundTripEveryUnit) {
  for (Unit u : {Unit::m, Unit::cm, Unit::mm, Unit::um, Unit::nm, Unit::m_per_V, Unit::pm_per_V, Unit::W, Unit::mW,
                 Unit::uW, Unit::rad_per_s, Unit::Hz, Unit::kHz, Unit::MHz, Unit::GHz, Unit::one}) {
    for (double v : {1e-3, 0.7, 42.0, 3.3e5}) {
      EXPECT_NEAR(from_si(to_si(v, u), u), v, 1e-15 * v) << unit_tag(u);
    }
    EXPECT_EQ(parse_unit(unit_tag(u)), u);
  }
}

// ---------------------------------------------------------------- quantities

TEST(Quantities, EnergyConservationAndDerivedWaves) {
  const auto w = ppktp();
  EXPECT_NEAR(w.pump().vacuum_wavelength(), 400e-9, 1e-20);
  EXPECT_DOUBLE_EQ(w.pump().angular_frequency(), w.signal().angular_frequency() + w.idler().angular_frequency());
  EXPECT_DOUBLE_EQ(w.signal().wavenumber(), 2.0 * constants::pi * 1.844 / 800e-9);
  EXPECT_FALSE(w.degenerate());
  const auto s = w.swapped();
  EXPECT_EQ(s.signal(), w.idler());
  EXPECT_EQ(s.idler(), w.signal());
}

TEST(Quantities, DegenerateTripleHasOneDownconvertedField) {
  const auto w = WaveTriple::make_degenerate(1064e-9, 1.8, 1.85);
  EXPECT_TRUE(w.degenerate());
  EXPECT_EQ(w.signal(), w.idler());
  EXPECT_NEAR(w.pump().vacuum_wavelength(), 532e-9, 1e-20);
}

TEST(Quantities, ReferenceWavenumberRatio) {
  // R_k of the type-II PPKTP design.
  const auto w = ppktp();
  EXPECT_NEAR(w.k_minus() / w.k_plus(), 0.0434320626909, 1e-12);
}

TEST(Quantities, PolingSolverHitsTargetKappa) {
  const auto w = ppktp();
  for (double kappa : {-12.0, -3.0, 0.0, 2.5}) {
    const CrystalSpec c(0.01, solve_poling_period(w, 0.01, kappa), 2.4e-12);
    EXPECT_NEAR(phase_mismatch(w, c) * c.length(), kappa, 1e-6);
  }
  EXPECT_THROW(solve_poling_period(w, 0.01, 1e9), std::invalid_argument);
}

TEST(Quantities, DimensionlessParametersScaleWithLength) {
  // κ ∝ L and ζ_R ∝ 1/L at fixed grating and Rayleigh range; R_k is unchanged.
  const auto w = ppktp();
  const CrystalSpec c(0.01, solve_poling_period(w, 0.01, -3.0), 2.4e-12);
  const auto a = derive_focus_params(w, c, 1.8e-3);
  const auto b = derive_focus_params(w, c.with_length(0.02), 1.8e-3);
  EXPECT_NEAR(b.kappa, 2.0 * a.kappa, 1e-9);
  EXPECT_NEAR(b.zeta_R, a.zeta_R / 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(a.R_k, b.R_k);
  EXPECT_DOUBLE_EQ(a.zeta_R, 0.18);
}

TEST(Quantities, InvalidInputsAreRejected) {
  EXPECT_THROW(CrystalSpec(0.0, std::nullopt, 1e-12), std::invalid_argument);
  EXPECT_THROW(CrystalSpec(0.01, -1e-6, 1e-12), std::invalid_argument);
  EXPECT_THROW(CrystalSpec(0.01, std::nullopt, 0.0), std::invalid_argument);
  EXPECT_THROW(FocusParams::dimensionless(0.0, 0.0, 0.0), std::invalid_argument);
  EXPECT_THROW(FocusParams::dimensionless(0.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(FocusParams::dimensionless(NAN, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(WaveTriple::from_signal_idler(-800e-9, 1.8, 800e-9, 1.8, 1.9), std::invalid_argument);
}

// ---------------------------------------------------------------- quadrature

TEST(Quadrature, PolynomialAndOscillatory) {
  const auto r = quad::integrate([](double x) { return x * x * x - 2.0 * x; }, -1.0, 3.0);
  EXPECT_NEAR(r.value, 12.0, 1e-12);
  const double k = 400.0;
  const auto o = quad::integrate([k](double x) { return std::polar(1.0, k * x); }, 0.0, 1.0);
  const std::complex<double> exact = (std::polar(1.0, k) - 1.0) / std::complex<double>(0.0, k);
  EXPECT_LT(std::abs(o.value - exact), 1e-11);
}

TEST(Quadrature, InfiniteRanges) {
  quad::Options opt;
  opt.rel_tol = 1e-11;
  const auto g = quad::integrate_infinite([](double x) { return std::exp(-x * x); }, opt);
  EXPECT_NEAR(g.value, std::sqrt(constants::pi), 1e-10);
  const auto l = quad::integrate_semi_infinite([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, opt);
  EXPECT_NEAR(l.value, constants::pi / 2.0, 1e-10);
}

TEST(Quadrature, BudgetExhaustionIsReported) {
  quad::Options opt;
  opt.max_subdivisions = 3;
  opt.rel_tol = 1e-14;
  EXPECT_THROW(quad::integrate([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, opt), quad::QuadratureError);
  EXPECT_THROW(quad::integrate([](double x) { return x; }, 0.0, INFINITY), quad::QuadratureError);
}

// ---------------------------------------------------------------- materials

TEST(Materials, BuiltinRecordMatchesReferenceIndices) {
  const auto rec = find_material(builtin_materials(), "PPKTP-800-typeII");
  EXPECT_DOUBLE_EQ(index_at(rec, 800e-9, Axis::signal), 1.844);
  EXPECT_DOUBLE_EQ(index_at(rec, 800e-9, Axis::idler), 1.757);
  EXPECT_DOUBLE_EQ(index_at(rec, 400e-9, Axis::pump), 1.964);
  EXPECT_DOUBLE_EQ(index_at(rec, 800.4e-9, Axis::signal), 1.844);
  EXPECT_DOUBLE_EQ(rec.d_eff, 2.4e-12);
  EXPECT_THROW(index_at(rec, 810e-9, Axis::signal), MaterialError);
  EXPECT_THROW(find_material(builtin_materials(), "BBO"), MaterialError);
}

constexpr const char* kDb = R"(# two records
[flat]
type = sellmeier
sellmeier_s = 2.25
sellmeier_i = 2.25
sellmeier_p = 2.25
d_eff_pm_per_V = 1
lambda_min_nm = 300
lambda_max_nm = 2000

[ktp]
type = sellmeier
sellmeier_s = 2.25411 1.06543 0.05486
ir_s = 0.02140
sellmeier_i = 2.19229 0.83547 0.04970
ir_i = 0.01621
sellmeier_p = 2.25411 1.06543 0.05486
ir_p = 0.02140
d_eff_pm_per_V = 2.4
lambda_min_nm = 380
lambda_max_nm = 1700
)";

TEST(Materials, ConstantSellmeierGivesConstantIndex) {
  std::istringstream in(kDb);
  const auto db = parse_material_db(in);
  ASSERT_EQ(db.size(), 2u);
  const auto& flat = find_material(db, "flat");
  for (double l : {300e-9, 532e-9, 1064e-9, 2000e-9}) {
    for (Axis a : {Axis::signal, Axis::idler, Axis::pump}) EXPECT_NEAR(index_at(flat, l, a), 1.5, 1e-15);
  }
  EXPECT_THROW(index_at(flat, 250e-9, Axis::pump), MaterialError);
}

TEST(Materials, SellmeierIsSmoothAndNormallyDispersive) {
  std::istringstream in(kDb);
  const auto db = parse_material_db(in);
  const auto& ktp = find_material(db, "ktp");
  EXPECT_NEAR(index_at(ktp, 800e-9, Axis::idler), 1.757, 2e-3);
  EXPECT_NEAR(index_at(ktp, 800e-9, Axis::signal), 1.844, 3e-3);
  EXPECT_NEAR(index_at(ktp, 400e-9, Axis::pump), 1.964, 5e-3);
  double prev = index_at(ktp, 400e-9, Axis::idler);
  for (double l = 401e-9; l <= 1600e-9; l += 1e-9) {
    const double n = index_at(ktp, l, Axis::idler);
    EXPECT_LT(n, prev);
    EXPECT_LT(prev - n, 1e-3);  // no jumps on a 1 nm step
    prev = n;
  }
}

TEST(Materials, SerializeRoundTripIsExact) {
  std::istringstream in(kDb);
  const auto db = parse_material_db(in);
  auto all = db;
  all.push_back(builtin_ppktp_800());
  const std::string text = serialize_material_db(all);
  std::istringstream again(text);
  const auto back = parse_material_db(again);
  ASSERT_EQ(back.size(), all.size());
  for (std::size_t j = 0; j < all.size(); ++j) {
    EXPECT_EQ(back[j].name, all[j].name);
    EXPECT_EQ(back[j].d_eff, all[j].d_eff);
    for (Axis a : {Axis::signal, Axis::idler, Axis::pump}) {
      const double l = all[j].model == MaterialRecord::Model::fixed
                           ? all[j].pinned_wavelength[static_cast<std::size_t>(a)]
                           : 900e-9;
      EXPECT_EQ(index_at(back[j], l, a), index_at(all[j], l, a));
    }
  }
  EXPECT_EQ(serialize_material_db(back), text);
}

TEST(Materials, ErrorsNameTheLine) {
  auto error_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_material_db(in, "db");
    } catch (const MaterialError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(error_of("[a]\ntype = fixed\ncolour = blue\n").find("db:3: unknown key 'colour'"), std::string::npos);
  EXPECT_NE(error_of("[a]\ntype = fixed\ntype = fixed\n").find("db:3"), std::string::npos);
  EXPECT_NE(error_of("n_s = 1.8\n").find("outside of a [material] section"), std::string::npos);
  EXPECT_NE(error_of("[a\n").find("malformed section header"), std::string::npos);
  const std::string rec = "type = fixed\nn_s = 1.8\nn_i = 1.8\nn_p = 1.9\nlambda_s_nm = 800\nlambda_i_nm = 800\n"
                          "lambda_p_nm = 400\nd_eff_pm_per_V = 2\n";
  EXPECT_EQ(error_of("[a]\n" + rec), "no error");
  EXPECT_NE(error_of("[a]\n" + rec + "[a]\n" + rec).find("duplicate material 'a'"), std::string::npos);
  // Pole inside the valid range.
  EXPECT_NE(error_of("[p]\ntype = sellmeier\nsellmeier_s = 1 1 0.36\nsellmeier_i = 2\nsellmeier_p = 2\n"
                     "d_eff_pm_per_V = 1\nlambda_min_nm = 400\nlambda_max_nm = 900\n")
                .find("pole"),
            std::string::npos);
  EXPECT_NE(error_of("[a]\ntype = fixed\nn_s = 0.5\nn_i = 1.8\nn_p = 1.9\nlambda_s_nm = 800\nlambda_i_nm = 800\n"
                     "lambda_p_nm = 400\nd_eff_pm_per_V = 2\n")
                .find("index must be >= 1"),
            std::string::npos);
}
