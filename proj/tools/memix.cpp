// Command-line frontend: model-file risk analytics, background-risk scaling,
// calibration, and sample generation.  Every numeric answer is the library
// result printed with 17 significant digits, one JSON object per line.
// Exit codes: 0 success, 2 bad input or parse failure, 3 mathematical
// domain violation, 4 numeric non-convergence.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "memix/background.hpp"
#include "memix/calibration.hpp"
#include "memix/model_io.hpp"
#include "memix/risk.hpp"
#include "memix/simulate.hpp"

namespace {

using namespace memix;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num_list(const Eigen::VectorXd& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += num(v(i));
  }
  return out + "]";
}

std::string num_rows(const Eigen::MatrixXd& a) {
  std::string out = "[";
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    if (r) out += ',';
    out += num_list(a.row(r).transpose());
  }
  return out + "]";
}

std::string js_str(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string tok = text.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InputError(what + ": not a number: \"" + tok + "\"");
    }
    pos = comma + 1;
  }
  return out;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

// One level broadcasts to every coordinate; otherwise one level per
// coordinate is required.
Eigen::VectorXd theta_vector(const std::string& text, int m) {
  const std::vector<double> v = parse_list(text, "--theta");
  if (v.size() == 1) return Eigen::VectorXd::Constant(m, v[0]);
  require_input(static_cast<int>(v.size()) == m,
                "--theta: need one level or one per coordinate");
  return to_vector(v);
}

// kind:params with kind in {degenerate, gamma, discrete}: degenerate:b,
// gamma:shape,rate, discrete:x1,q1,x2,q2,...
bg::BackgroundRisk parse_bg(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  require_input(colon != std::string::npos && colon > 0,
                "--bg: expected kind:params");
  const std::string kind = spec.substr(0, colon);
  const std::vector<double> p = parse_list(spec.substr(colon + 1), "--bg");
  if (kind == "degenerate") {
    require_input(p.size() == 1, "--bg: degenerate takes one parameter");
    return bg::BackgroundRisk::degenerate(p[0]);
  }
  if (kind == "gamma") {
    require_input(p.size() == 2, "--bg: gamma takes shape,rate");
    return bg::BackgroundRisk::gamma(p[0], p[1]);
  }
  if (kind == "discrete") {
    require_input(p.size() >= 2 && p.size() % 2 == 0,
                  "--bg: discrete takes x1,q1,x2,q2,...");
    std::vector<double> points, probs;
    for (std::size_t i = 0; i < p.size(); i += 2) {
      points.push_back(p[i]);
      probs.push_back(p[i + 1]);
    }
    return bg::BackgroundRisk::discrete(points, probs);
  }
  throw InputError("--bg: unknown kind \"" + kind + "\"");
}

// Comma list of per-order-statistic treaties: none | full | prop:share |
// xl:threshold.
std::vector<risk::OrderStatTreaty> parse_layers(const std::string& text) {
  std::vector<risk::OrderStatTreaty> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string tok = text.substr(pos, comma - pos);
    risk::OrderStatTreaty g;
    if (tok == "none") {
      g.kind = risk::OrderStatTreaty::Kind::none;
    } else if (tok == "full") {
      g.kind = risk::OrderStatTreaty::Kind::full;
    } else if (tok.rfind("prop:", 0) == 0) {
      g.kind = risk::OrderStatTreaty::Kind::proportional;
      g.share = parse_list(tok.substr(5), "--layers prop").at(0);
    } else if (tok.rfind("xl:", 0) == 0) {
      g.kind = risk::OrderStatTreaty::Kind::excess;
      g.threshold = parse_list(tok.substr(3), "--layers xl").at(0);
    } else {
      throw InputError("--layers: unknown treaty \"" + tok + "\"");
    }
    out.push_back(g);
    pos = comma + 1;
  }
  return out;
}

risk::AllocationRequest::Rule parse_rule(const std::string& name) {
  if (name == "covariance") return risk::AllocationRequest::Rule::covariance;
  if (name == "tcovp") return risk::AllocationRequest::Rule::tcovp;
  if (name == "tcpa") return risk::AllocationRequest::Rule::tcpa;
  throw InputError("--rule: unknown rule \"" + name + "\"");
}

risk::CovarMode parse_mode(const std::string& name) {
  if (name == "eq") return risk::CovarMode::eq;
  if (name == "gt") return risk::CovarMode::gt;
  if (name == "sum") return risk::CovarMode::sum_given_x1;
  throw InputError("--mode: unknown mode \"" + name + "\"");
}

void emit(const std::string& body) { std::cout << "{" << body << "}\n"; }

struct Options {
  std::string model;
  std::string at;
  std::string theta = "0.95";
  std::string rule = "covariance";
  std::string mode = "gt";
  std::string bg_spec;
  std::string layers;
  std::string data;
  std::string marginals;
  std::string out;
  double beta = 0.0;
  double deductible = 0.0;
  double point = 0.0;
  double threshold = 0.0;
  double tol = 0.0;
  int order = 1;
  int k = 1;
  int coordinate = 1;
  int power = 0;
  int agg_power = 1;
  std::int64_t samples = 10000;
  std::uint64_t seed = 0;
  int threads = 1;
};

NumericContext make_context(const Options& o) {
  NumericContext ctx = default_context();
  if (o.tol > 0.0) {
    ctx.quantile_tol = o.tol;
    ctx.contour_tol = o.tol;
  }
  return ctx;
}

MmeamModel load_model(const Options& o, const NumericContext& ctx) {
  return io::read_model_file(o.model, ctx);
}

void add_model(CLI::App* cmd, Options& o) {
  cmd->add_option("-m,--model", o.model, "model file (JSON)")->required();
}

void add_tol(CLI::App* cmd, Options& o) {
  cmd->add_option("--tol", o.tol, "root-finder tolerance on the CDF level");
}

void run_eval(const Options& o) {
  const NumericContext ctx = make_context(o);
  const MmeamModel m = load_model(o, ctx);
  const Eigen::VectorXd x = to_vector(parse_list(o.at, "--at"));
  require_input(static_cast<int>(x.size()) == m.dim(),
                "--at: need one value per coordinate");
  emit("\"op\":\"eval\",\"model\":" + js_str(o.model) +
       ",\"at\":" + num_list(x) + ",\"pdf\":" + num(m.joint_density(x)) +
       ",\"survival\":" + num(m.joint_survival(x)));
}

void run_risk_var(const Options& o) {
  const NumericContext ctx = make_context(o);
  const MmeamModel m = load_model(o, ctx);
  const double theta = parse_list(o.theta, "--theta").at(0);
  const double v = quantile(risk::aggregate(m, ctx), theta, ctx);
  emit("\"op\":\"risk.var\",\"model\":" + js_str(o.model) +
       ",\"theta\":" + num(theta) + ",\"value\":" + num(v));
}

void run_risk_tvar(const Options& o) {
  const NumericContext ctx = make_context(o);
  const MmeamModel m = load_model(o, ctx);
  const double theta = parse_list(o.theta, "--theta").at(0);
  const double v = risk::tail_expectation(risk::aggregate(m, ctx), theta, ctx);
  emit("\"op\":\"risk.tvar\",\"model\":" + js_str(o.model) +
       ",\"theta\":" + num(theta) + ",\"value\":" + num(v));
}

void run_risk_mtce(const Options& o) {
  const NumericContext ctx = make_context(o);
  const MmeamModel m = load_model(o, ctx);
  const Eigen::VectorXd theta = theta_vector(o.theta, m.dim());
  const Eigen::VectorXd v = risk::mtce(m, theta, ctx);
  emit("\"op\":\"risk.mtce\",\"model\":" + js_str(o.model) +
       ",\"theta\":" + num_list(theta) + ",\"value\":" + num_list(v));
}

void run_risk_mtcov(const Options& o) {
  const NumericContext ctx = make_context(o);
  const MmeamModel m = load_model(o, ctx);
  const Eigen::VectorXd theta = theta_vector(o.theta, m.dim());
  const Eigen::MatrixXd v = risk::mtcov(m, theta, ctx);
  emit("\"op\":\"risk.mtcov\",\"model\":" + js_str(o.model) +
       ",\"theta\":" + num_list(theta) + ",\"value\":" + num_rows(v));
}

void run_risk_covar(const Options& o) {
  const NumericContext ctx = make_context(o);
  const MmeamModel m = load_model(o, ctx);
  const std::vector<double> levels = parse_list(o.theta, "--theta");
  require_input(levels.size() == 2, "--theta: need two levels theta1,theta2");
  const double v = risk::covar(m, parse_mode(o.mode), levels[0], levels[1], ctx);
  emit("\"op\":\"risk.covar\",\"model\":" + js_str(o.model) +
       ",\"mode\":" + js_str(o.mode) + ",\"theta\":[" + num(levels[0]) + "," +
       num(levels[1]) + "],\"value\":" + num(v));
}

void run_risk_stoploss(const Options& o) {
  const NumericContext ctx = make_context(o);
  const MmeamModel m = load_model(o, ctx);
  const risk::StopLoss s = risk::stop_loss_moment(m, o.deductible, o.order, ctx);
  emit("\"op\":\"risk.stoploss\",\"model\":" + js_str(o.model) +
       ",\"deductible\":" + num(o.deductible) +
       ",\"order\":" + std::to_string(o.order) + ",\"value\":" + num(s.value) +
       ",\"extinct\":" + (s.extinct ? "true" : "false"));
}

void run_risk_aggregate(const Options& o) {
  const NumericContext ctx = make_context(o);
  const MmeamModel m = load_model(o, ctx);
  const MeMixture s = risk::aggregate(m, ctx);
  emit("\"op\":\"risk.aggregate\",\"model\":" + js_str(o.model) +
       ",\"at\":" + num(o.point) + ",\"pdf\":" + num(s.pdf(o.point)) +
       ",\"cdf\":" + num(1.0 - s.sf(o.point)) +
       ",\"survival\":" + num(s.sf(o.point)));
}

void run_allocate(const Options& o) {
  const NumericContext ctx = make_context(o);
  const MmeamModel m = load_model(o, ctx);
  risk::AllocationRequest req;
  req.rule = parse_rule(o.rule);
  req.theta = parse_list(o.theta, "--theta").at(0);
  req.beta = o.beta;
  const risk::Allocation a = risk::allocate(m, req, ctx);
  emit("\"op\":\"allocate\",\"model\":" + js_str(o.model) +
       ",\"rule\":" + js_str(o.rule) + ",\"theta\":" + num(req.theta) +
       ",\"beta\":" + num(req.beta) + ",\"per_risk\":" + num_list(a.per_risk) +
       ",\"total\":" + num(a.total));
}

void run_reinsure(const Options& o, const std::string& treaty) {
  const NumericContext ctx = make_context(o);
  const MmeamModel m = load_model(o, ctx);
  risk::ReinsuranceSpec spec;
  std::string extra;
  if (treaty == "lcr") {
    spec = risk::ReinsuranceSpec::lcr(o.k);
    extra = ",\"k\":" + std::to_string(o.k);
  } else if (treaty == "ecomor") {
    spec = risk::ReinsuranceSpec::ecomor(o.k);
    extra = ",\"k\":" + std::to_string(o.k);
  } else {
    require_input(!o.layers.empty(), "--layers is required for per_os");
    spec = risk::ReinsuranceSpec::per_os(parse_layers(o.layers));
    extra = ",\"layers\":" + js_str(o.layers);
  }
  const double v = risk::reinsurance_premium(m, spec, ctx);
  emit("\"op\":\"reinsure\",\"model\":" + js_str(o.model) +
       ",\"treaty\":" + js_str(treaty) + extra + ",\"premium\":" + num(v));
}

void run_bg_var(const Options& o) {
  const NumericContext ctx = make_context(o);
  const MmeamModel m = load_model(o, ctx);
  const bg::BackgroundRisk b = parse_bg(o.bg_spec);
  const double theta = parse_list(o.theta, "--theta").at(0);
  const double v = bg::bg_aggregate(m, b, ctx).quantile(theta);
  emit("\"op\":\"bg.var\",\"model\":" + js_str(o.model) +
       ",\"background\":" + js_str(o.bg_spec) + ",\"theta\":" + num(theta) +
       ",\"value\":" + num(v));
}

void run_bg_tvar(const Options& o) {
  const NumericContext ctx = make_context(o);
  const MmeamModel m = load_model(o, ctx);
  const bg::BackgroundRisk b = parse_bg(o.bg_spec);
  const double theta = parse_list(o.theta, "--theta").at(0);
  const double v = bg::bg_aggregate(m, b, ctx).quantile(theta);
  const double tce =
      bg::bg_joint_tail_moment(m, b, 0, 0, 1, v, ctx) / (1.0 - theta);
  emit("\"op\":\"bg.tvar\",\"model\":" + js_str(o.model) +
       ",\"background\":" + js_str(o.bg_spec) + ",\"theta\":" + num(theta) +
       ",\"var\":" + num(v) + ",\"value\":" + num(tce));
}

void run_bg_cdf(const Options& o, bool marginal) {
  const NumericContext ctx = make_context(o);
  const MmeamModel m = load_model(o, ctx);
  const bg::BackgroundRisk b = parse_bg(o.bg_spec);
  std::string extra;
  double v = 0.0;
  if (marginal) {
    require_input(o.coordinate >= 1 && o.coordinate <= m.dim(),
                  "-j: coordinate out of range");
    v = bg::bg_marginal_cdf(m, b, o.coordinate - 1, o.point, ctx);
    extra = ",\"coordinate\":" + std::to_string(o.coordinate);
  } else {
    v = bg::bg_aggregate(m, b, ctx).cdf(o.point);
  }
  emit("\"op\":\"bg.cdf\",\"model\":" + js_str(o.model) +
       ",\"background\":" + js_str(o.bg_spec) + extra +
       ",\"at\":" + num(o.point) + ",\"value\":" + num(v));
}

void run_bg_moment(const Options& o) {
  const NumericContext ctx = make_context(o);
  const MmeamModel m = load_model(o, ctx);
  const bg::BackgroundRisk b = parse_bg(o.bg_spec);
  require_input(o.coordinate >= 1 && o.coordinate <= m.dim(),
                "-j: coordinate out of range");
  const double v = bg::bg_joint_tail_moment(m, b, o.coordinate - 1, o.power,
                                            o.agg_power, o.threshold, ctx);
  emit("\"op\":\"bg.moment\",\"model\":" + js_str(o.model) +
       ",\"background\":" + js_str(o.bg_spec) +
       ",\"coordinate\":" + std::to_string(o.coordinate) +
       ",\"power\":" + std::to_string(o.power) +
       ",\"aggregate_power\":" + std::to_string(o.agg_power) +
       ",\"threshold\":" + num(o.threshold) + ",\"value\":" + num(v));
}

void run_bg_allocate(const Options& o) {
  const NumericContext ctx = make_context(o);
  const MmeamModel m = load_model(o, ctx);
  const bg::BackgroundRisk b = parse_bg(o.bg_spec);
  risk::AllocationRequest req;
  req.rule = parse_rule(o.rule);
  req.theta = parse_list(o.theta, "--theta").at(0);
  req.beta = o.beta;
  const risk::Allocation a = bg::bg_allocate(m, b, req, ctx);
  emit("\"op\":\"bg.allocate\",\"model\":" + js_str(o.model) +
       ",\"background\":" + js_str(o.bg_spec) + ",\"rule\":" + js_str(o.rule) +
       ",\"theta\":" + num(req.theta) + ",\"beta\":" + num(req.beta) +
       ",\"per_risk\":" + num_list(a.per_risk) + ",\"total\":" + num(a.total));
}

void run_calibrate(const Options& o) {
  const NumericContext ctx = make_context(o);
  const calib::Dataset d = calib::ingest_csv_file(o.data);
  std::vector<MeTriple> marginals;
  std::string marginal_desc;
  if (o.marginals.empty()) {
    marginals = calib::fit_marginal_erlangs(d);
    marginal_desc = "\"moment-matched\"";
  } else {
    std::size_t pos = 0;
    marginal_desc = "[";
    while (pos <= o.marginals.size()) {
      const std::size_t comma =
          std::min(o.marginals.find(',', pos), o.marginals.size());
      const std::string path = o.marginals.substr(pos, comma - pos);
      marginals.push_back(io::read_triple_file(path, ctx));
      if (pos) marginal_desc += ',';
      marginal_desc += js_str(path);
      pos = comma + 1;
    }
    marginal_desc += "]";
  }
  const MmeamModel fit = calib::calibrate(d, marginals, o.order, ctx);
  if (o.out.empty()) {
    std::cout << io::model_to_string(fit) << "\n";
    return;
  }
  io::write_model_file(o.out, fit);
  emit("\"op\":\"calibrate\",\"data\":" + js_str(o.data) +
       ",\"marginals\":" + marginal_desc +
       ",\"order\":" + std::to_string(o.order) +
       ",\"rows\":" + std::to_string(d.n()) + ",\"out\":" + js_str(o.out));
}

void run_simulate(const Options& o) {
  const NumericContext ctx = make_context(o);
  const MmeamModel m = load_model(o, ctx);
  mc::SimConfig cfg;
  cfg.sample_count = o.samples;
  cfg.seed = o.seed;
  cfg.parallel_streams = o.threads;
  const Eigen::MatrixXd samples = mc::simulate(m, cfg, ctx);
  std::ofstream file;
  std::ostream* dst = &std::cout;
  if (!o.out.empty()) {
    file.open(o.out, std::ios::binary);
    require_input(file.good(), "cannot open file for writing: " + o.out);
    dst = &file;
  }
  // The header never names the thread count: outputs are identical across
  // stream partitions, and the bytes prove it.
  *dst << "# seed=" << o.seed << " samples=" << o.samples << "\n";
  for (int j = 0; j < m.dim(); ++j)
    *dst << (j ? ",x" : "x") << j + 1;
  *dst << "\n";
  for (Eigen::Index r = 0; r < samples.rows(); ++r) {
    for (Eigen::Index c = 0; c < samples.cols(); ++c)
      *dst << (c ? "," : "") << num(samples(r, c));
    *dst << "\n";
  }
  require_input(dst->good(), "failed to write samples");
  if (!o.out.empty())
    emit("\"op\":\"simulate\",\"model\":" + js_str(o.model) +
         ",\"samples\":" + std::to_string(o.samples) +
         ",\"seed\":" + std::to_string(o.seed) +
         ",\"threads\":" + std::to_string(o.threads) +
         ",\"out\":" + js_str(o.out));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk analytics for matrix-exponential mixture models"};
  app.require_subcommand(1);
  Options o;

  CLI::App* eval = app.add_subcommand("eval", "Joint density and survival at a point");
  add_model(eval, o);
  eval->add_option("--at", o.at, "point x1,...,xM")->required();
  add_tol(eval, o);
  eval->callback([&] { run_eval(o); });

  CLI::App* risk_cmd = app.add_subcommand("risk", "Aggregate and multivariate risk measures");
  risk_cmd->require_subcommand(1);

  CLI::App* rvar = risk_cmd->add_subcommand("var", "Value-at-risk of the aggregate");
  add_model(rvar, o);
  rvar->add_option("--theta", o.theta, "confidence level")->required();
  add_tol(rvar, o);
  rvar->callback([&] { run_risk_var(o); });

  CLI::App* rtvar = risk_cmd->add_subcommand("tvar", "Tail value-at-risk of the aggregate");
  add_model(rtvar, o);
  rtvar->add_option("--theta", o.theta, "confidence level")->required();
  add_tol(rtvar, o);
  rtvar->callback([&] { run_risk_tvar(o); });

  CLI::App* rmtce = risk_cmd->add_subcommand("mtce", "Multivariate tail conditional expectation");
  add_model(rmtce, o);
  rmtce->add_option("--theta", o.theta, "levels theta1,...,thetaM")->required();
  add_tol(rmtce, o);
  rmtce->callback([&] { run_risk_mtce(o); });

  CLI::App* rmtcov = risk_cmd->add_subcommand("mtcov", "Multivariate tail covariance matrix");
  add_model(rmtcov, o);
  rmtcov->add_option("--theta", o.theta, "levels theta1,...,thetaM")->required();
  add_tol(rmtcov, o);
  rmtcov->callback([&] { run_risk_mtcov(o); });

  CLI::App* rcovar = risk_cmd->add_subcommand("covar", "Conditional value-at-risk of X2 given X1");
  add_model(rcovar, o);
  rcovar->add_option("--theta", o.theta, "levels theta1,theta2")->required();
  rcovar->add_option("--mode", o.mode, "conditioning: eq, gt, or sum");
  add_tol(rcovar, o);
  rcovar->callback([&] { run_risk_covar(o); });

  CLI::App* rstop = risk_cmd->add_subcommand("stoploss", "Stop-loss moment of the aggregate");
  add_model(rstop, o);
  rstop->add_option("-d,--deductible", o.deductible, "deductible");
  rstop->add_option("-r,--order", o.order, "moment order");
  add_tol(rstop, o);
  rstop->callback([&] { run_risk_stoploss(o); });

  CLI::App* ragg = risk_cmd->add_subcommand("aggregate", "Aggregate density, CDF, and survival at a point");
  add_model(ragg, o);
  ragg->add_option("--at", o.point, "evaluation point")->required();
  add_tol(ragg, o);
  ragg->callback([&] { run_risk_aggregate(o); });

  CLI::App* alloc = app.add_subcommand("allocate", "Capital allocation across coordinates");
  add_model(alloc, o);
  alloc->add_option("--rule", o.rule, "covariance, tcovp, or tcpa")->required();
  alloc->add_option("--theta", o.theta, "confidence level")->required();
  alloc->add_option("--beta", o.beta, "loading coefficient");
  add_tol(alloc, o);
  alloc->callback([&] { run_allocate(o); });

  CLI::App* reins = app.add_subcommand("reinsure", "Reinsurance premium on order statistics");
  add_model(reins, o);
  std::string treaty = "lcr";
  reins->add_option("--treaty", treaty, "lcr, ecomor, or per_os")->required();
  reins->add_option("-k", o.k, "number of covered largest losses");
  reins->add_option("--layers", o.layers,
                    "per-order-statistic treaties none|full|prop:s|xl:t");
  add_tol(reins, o);
  reins->callback([&] {
    require_input(treaty == "lcr" || treaty == "ecomor" || treaty == "per_os",
                  "--treaty: unknown treaty \"" + treaty + "\"");
    run_reinsure(o, treaty);
  });

  CLI::App* bgc = app.add_subcommand("bg", "Background-risk scaled quantities");
  bgc->require_subcommand(1);

  CLI::App* bvar = bgc->add_subcommand("var", "Value-at-risk of the scaled aggregate");
  add_model(bvar, o);
  bvar->add_option("--bg", o.bg_spec, "background risk kind:params")->required();
  bvar->add_option("--theta", o.theta, "confidence level")->required();
  add_tol(bvar, o);
  bvar->callback([&] { run_bg_var(o); });

  CLI::App* btvar = bgc->add_subcommand("tvar", "Tail value-at-risk of the scaled aggregate");
  add_model(btvar, o);
  btvar->add_option("--bg", o.bg_spec, "background risk kind:params")->required();
  btvar->add_option("--theta", o.theta, "confidence level")->required();
  add_tol(btvar, o);
  btvar->callback([&] { run_bg_tvar(o); });

  CLI::App* bcdf = bgc->add_subcommand("cdf", "CDF of a scaled coordinate or the scaled aggregate");
  add_model(bcdf, o);
  bcdf->add_option("--bg", o.bg_spec, "background risk kind:params")->required();
  bcdf->add_option("--at", o.point, "evaluation point")->required();
  CLI::Option* bcdf_j =
      bcdf->add_option("-j,--coordinate", o.coordinate, "coordinate (1-based)");
  add_tol(bcdf, o);
  bcdf->callback([&] { run_bg_cdf(o, bcdf_j->count() > 0); });

  CLI::App* bmom = bgc->add_subcommand("moment", "Scaled joint tail moment");
  add_model(bmom, o);
  bmom->add_option("--bg", o.bg_spec, "background risk kind:params")->required();
  bmom->add_option("-j,--coordinate", o.coordinate, "coordinate (1-based)");
  bmom->add_option("-k,--power", o.power, "coordinate power");
  bmom->add_option("-r,--aggregate-power", o.agg_power, "aggregate power");
  bmom->add_option("-d,--threshold", o.threshold, "tail threshold");
  add_tol(bmom, o);
  bmom->callback([&] { run_bg_moment(o); });

  CLI::App* balloc = bgc->add_subcommand("allocate", "Capital allocation under background scaling");
  add_model(balloc, o);
  balloc->add_option("--bg", o.bg_spec, "background risk kind:params")->required();
  balloc->add_option("--rule", o.rule, "covariance, tcovp, or tcpa")->required();
  balloc->add_option("--theta", o.theta, "confidence level")->required();
  balloc->add_option("--beta", o.beta, "loading coefficient");
  add_tol(balloc, o);
  balloc->callback([&] { run_bg_allocate(o); });

  CLI::App* cal = app.add_subcommand("calibrate", "Fit a model from CSV data");
  cal->add_option("--data", o.data, "CSV file with a header row")->required();
  cal->add_option("--marginals", o.marginals,
                  "comma list of marginal triple files (default: moment fit)");
  cal->add_option("--order", o.order, "copula grid order")->required();
  cal->add_option("--out", o.out, "output model file (default: stdout)");
  add_tol(cal, o);
  cal->callback([&] { run_calibrate(o); });

  CLI::App* sim = app.add_subcommand("simulate", "Draw samples and write CSV");
  add_model(sim, o);
  sim->add_option("--samples", o.samples, "number of samples")->required();
  sim->add_option("--seed", o.seed, "RNG seed");
  sim->add_option("--threads", o.threads, "parallel sampling streams");
  sim->add_option("--out", o.out, "output CSV file (default: stdout)");
  add_tol(sim, o);
  sim->callback([&] { run_simulate(o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
