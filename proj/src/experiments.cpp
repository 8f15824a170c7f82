#include "korn/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace korn::sweep {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string pix(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::string to_string(modes::Path p) {
  return p == modes::Path::TwoD ? "2d" : "1d";
}

modes::Path path_from_string(const std::string& s) {
  if (s == "2d") return modes::Path::TwoD;
  if (s == "1d") return modes::Path::OneD;
  throw ConfigError("unknown reduction path '" + s + "' (expected 2d|1d)");
}

void SweepConfig::validate() const {
  if (hs.size() < 2) {
    throw ConfigError("a sweep needs at least two h values");
  }
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (!(hs[i] > 0.0) || !(hs[i] < 1.0)) {
      throw ConfigError("sweep h values must lie in (0, 1)");
    }
    if (i > 0 && !(hs[i] < hs[i - 1])) {
      throw ConfigError("sweep h values must be strictly decreasing");
    }
  }
  if (!(L > 0.0)) throw ConfigError("sweep L must be positive");
  if (!(tol > 0.0)) throw ConfigError("sweep tolerance must be positive");
  if (n_max < 0 || m_max < 0 || res.nr < 0 || res.nz < 0) {
    throw ConfigError("sweep truncations and resolutions must be >= 0");
  }
}

Fit fit_exponent(const std::vector<SweepRow>& rows) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : rows) {
    if (!row.ok) continue;
    if (!(row.value > 0.0)) {
      throw DegenerateInputError("row h=" + format17(row.h) +
                                 " has nonpositive value " +
                                 format17(row.value) +
                                 "; cannot fit a power law");
    }
    pts.emplace_back(std::log(row.h), std::log(row.value));
  }
  if (pts.size() < 2) {
    throw ConfigError("power-law fit needs at least two successful rows");
  }
  const double n = static_cast<double>(pts.size());
  KahanSum sx, sy, sxx, sxy;
  for (const auto& [x, y] : pts) {
    sx.add(x);
    sy.add(y);
    sxx.add(x * x);
    sxy.add(x * y);
  }
  const double det = n * sxx.value() - sx.value() * sx.value();
  if (det == 0.0) {
    throw DegenerateInputError("power-law fit is degenerate (single h)");
  }
  Fit fit;
  fit.slope = (n * sxy.value() - sx.value() * sy.value()) / det;
  fit.intercept = (sy.value() - fit.slope * sx.value()) / n;
  for (const auto& [x, y] : pts) {
    const double pred = fit.intercept + fit.slope * x;
    const double rel = std::abs(std::expm1(pred - y));
    fit.max_rel_residual = std::max(fit.max_rel_residual, rel);
  }
  return fit;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepResult out;
  out.config = cfg;
  out.rows.reserve(cfg.hs.size());
  for (double h : cfg.hs) {
    SweepRow row;
    row.h = h;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const ShellGeometry geom(h, cfg.L);
      if (cfg.ansatz) {
        const auto scan = ansatz::scan_scales(geom);
        row.value = scan.best_rayleigh;
      } else {
        modes::EnvelopeOptions opt;
        opt.n_max = cfg.n_max;
        opt.m_max = cfg.m_max;
        opt.res = cfg.res;
        opt.tol = cfg.tol;
        opt.seed = cfg.seed;
        const auto env =
            modes::mode_envelope(geom, cfg.space, cfg.kind, cfg.path, opt);
        row.value = env.value;
        row.mode_n = env.index.n;
        row.mode_m = env.index.m;
        row.residual = env.residual;
        row.nr = env.nr;
        row.nz = env.nz;
        row.truncation_warning = env.truncation_warning;
      }
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
    }
    if (cfg.timing) {
      row.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
    }
    out.rows.push_back(std::move(row));
  }
  try {
    out.fit = fit_exponent(out.rows);
    out.fit_ok = true;
  } catch (const Error&) {
    out.fit = Fit{kNaN, kNaN, kNaN};
    out.fit_ok = false;
  }
  return out;
}

std::string config_echo(const SweepConfig& cfg) {
  std::ostringstream os;
  os << "kind=" << (cfg.ansatz ? std::string("ansatz")
                               : modes::to_string(cfg.kind))
     << "\n";
  os << "space=" << korn::to_string(cfg.space) << "\n";
  os << "path=" << to_string(cfg.path) << "\n";
  os << "h_values=";
  for (std::size_t i = 0; i < cfg.hs.size(); ++i) {
    os << (i ? "," : "") << format17(cfg.hs[i]);
  }
  os << "\n";
  os << "L=" << format17(cfg.L) << "\n";
  os << "n_r=" << cfg.res.nr << "\n";
  os << "n_z=" << cfg.res.nz << "\n";
  os << "n_max=" << cfg.n_max << "\n";
  os << "m_max=" << cfg.m_max << "\n";
  os << "tol=" << format17(cfg.tol) << "\n";
  os << "seed=" << cfg.seed << "\n";
  os << "ansatz=" << (cfg.ansatz ? "true" : "false") << "\n";
  os << "timing=" << (cfg.timing ? "true" : "false") << "\n";
  return os.str();
}

std::string config_hash(const SweepConfig& cfg) {
  return sha1_hex(config_echo(cfg));
}

std::string to_csv(const SweepResult& result) {
  std::ostringstream os;
  os << "# kornlab sweep\n";
  os << "# config-sha1=" << config_hash(result.config) << "\n";
  std::istringstream echo(config_echo(result.config));
  for (std::string line; std::getline(echo, line);) {
    os << "# " << line << "\n";
  }
  if (result.fit_ok) {
    os << "# fit slope=" << format17(result.fit.slope)
       << " intercept=" << format17(result.fit.intercept)
       << " max_rel_residual=" << format17(result.fit.max_rel_residual)
       << "\n";
  }
  os << "h,value,mode_n,mode_m,residual,n_r,n_z,seconds\n";
  for (const auto& row : result.rows) {
    if (!row.ok) {
      os << "# error h=" << format17(row.h) << ": " << row.error << "\n";
      continue;
    }
    os << format17(row.h) << "," << format17(row.value) << "," << row.mode_n
       << "," << row.mode_m << "," << format17(row.residual) << "," << row.nr
       << "," << row.nz << "," << format17(row.seconds) << "\n";
    if (row.truncation_warning) {
      os << "# warning h=" << format17(row.h)
         << ": extreme mode sits on the truncation boundary\n";
    }
  }
  return os.str();
}

std::string to_json(const SweepResult& result) {
  const SweepConfig& cfg = result.config;
  json jc;
  jc["kind"] = modes::to_string(cfg.kind);
  jc["space"] = korn::to_string(cfg.space);
  jc["path"] = to_string(cfg.path);
  json hs = json::array();
  for (double h : cfg.hs) hs.push_back(format17(h));
  jc["h_values"] = hs;
  jc["L"] = format17(cfg.L);
  jc["n_r"] = std::to_string(cfg.res.nr);
  jc["n_z"] = std::to_string(cfg.res.nz);
  jc["n_max"] = std::to_string(cfg.n_max);
  jc["m_max"] = std::to_string(cfg.m_max);
  jc["tol"] = format17(cfg.tol);
  jc["seed"] = std::to_string(cfg.seed);
  jc["ansatz"] = cfg.ansatz;
  jc["timing"] = cfg.timing;
  jc["sha1"] = config_hash(cfg);

  json rows = json::array();
  for (const auto& row : result.rows) {
    json jr;
    jr["h"] = format17(row.h);
    jr["value"] = format17(row.value);
    jr["mode_n"] = std::to_string(row.mode_n);
    jr["mode_m"] = std::to_string(row.mode_m);
    jr["residual"] = format17(row.residual);
    jr["n_r"] = std::to_string(row.nr);
    jr["n_z"] = std::to_string(row.nz);
    jr["seconds"] = format17(row.seconds);
    jr["ok"] = row.ok;
    jr["error"] = row.error;
    jr["truncation_warning"] = row.truncation_warning;
    rows.push_back(std::move(jr));
  }

  json jf;
  jf["slope"] = format17(result.fit.slope);
  jf["intercept"] = format17(result.fit.intercept);
  jf["max_rel_residual"] = format17(result.fit.max_rel_residual);

  json top;
  top["config"] = std::move(jc);
  top["rows"] = std::move(rows);
  top["fit"] = std::move(jf);
  return top.dump(2) + "\n";
}

SweepResult from_json(const std::string& text) {
  try {
    const json top = json::parse(text);
    SweepResult out;
    const json& jc = top.at("config");
    SweepConfig& cfg = out.config;
    cfg.kind = modes::kind_from_string(jc.at("kind").get<std::string>());
    cfg.space = space_from_string(jc.at("space").get<std::string>());
    cfg.path = path_from_string(jc.at("path").get<std::string>());
    cfg.hs.clear();
    for (const auto& h : jc.at("h_values")) {
      cfg.hs.push_back(parse17(h.get<std::string>()));
    }
    cfg.L = parse17(jc.at("L").get<std::string>());
    cfg.res.nr = std::stoi(jc.at("n_r").get<std::string>());
    cfg.res.nz = std::stoi(jc.at("n_z").get<std::string>());
    cfg.n_max = std::stoi(jc.at("n_max").get<std::string>());
    cfg.m_max = std::stoi(jc.at("m_max").get<std::string>());
    cfg.tol = parse17(jc.at("tol").get<std::string>());
    cfg.seed = std::stoull(jc.at("seed").get<std::string>());
    cfg.ansatz = jc.at("ansatz").get<bool>();
    cfg.timing = jc.at("timing").get<bool>();

    for (const auto& jr : top.at("rows")) {
      SweepRow row;
      row.h = parse17(jr.at("h").get<std::string>());
      row.value = parse17(jr.at("value").get<std::string>());
      row.mode_n = std::stoi(jr.at("mode_n").get<std::string>());
      row.mode_m = std::stoi(jr.at("mode_m").get<std::string>());
      row.residual = parse17(jr.at("residual").get<std::string>());
      row.nr = std::stoi(jr.at("n_r").get<std::string>());
      row.nz = std::stoi(jr.at("n_z").get<std::string>());
      row.seconds = parse17(jr.at("seconds").get<std::string>());
      row.ok = jr.at("ok").get<bool>();
      row.error = jr.at("error").get<std::string>();
      row.truncation_warning = jr.at("truncation_warning").get<bool>();
      out.rows.push_back(std::move(row));
    }

    const json& jf = top.at("fit");
    out.fit.slope = parse17(jf.at("slope").get<std::string>());
    out.fit.intercept = parse17(jf.at("intercept").get<std::string>());
    out.fit.max_rel_residual =
        parse17(jf.at("max_rel_residual").get<std::string>());
    out.fit_ok = !std::isnan(out.fit.slope);
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed sweep JSON: ") + e.what());
  } catch (const std::logic_error& e) {
    throw ConfigError(std::string("malformed sweep JSON: ") + e.what());
  }
}

std::string to_svg(const SweepResult& result) {
  constexpr double kW = 640.0, kH = 480.0;
  constexpr double kLeft = 70.0, kRight = 610.0;
  constexpr double kTop = 40.0, kBottom = 430.0;

  std::vector<std::pair<double, double>> pts;  // (log10 h, log10 value)
  for (const auto& row : result.rows) {
    if (row.ok && row.value > 0.0) {
      pts.emplace_back(std::log10(row.h), std::log10(row.value));
    }
  }

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
     << static_cast<int>(kW) << "\" height=\"" << static_cast<int>(kH)
     << "\" viewBox=\"0 0 " << static_cast<int>(kW) << " "
     << static_cast<int>(kH) << "\">\n";
  os << "<!-- config-sha1=" << config_hash(result.config) << " -->\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << static_cast<int>(kW)
     << "\" height=\"" << static_cast<int>(kH) << "\" fill=\"white\"/>\n";
  os << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << pix(kLeft) << "\" y1=\"" << pix(kBottom)
     << "\" x2=\"" << pix(kRight) << "\" y2=\"" << pix(kBottom) << "\"/>\n";
  os << "<line x1=\"" << pix(kLeft) << "\" y1=\"" << pix(kBottom)
     << "\" x2=\"" << pix(kLeft) << "\" y2=\"" << pix(kTop) << "\"/>\n";
  os << "</g>\n";
  os << "<text x=\"" << pix(0.5 * (kLeft + kRight)) << "\" y=\""
     << pix(kH - 12.0) << "\" text-anchor=\"middle\" font-size=\"14\">"
     << "log10(h)</text>\n";
  os << "<text x=\"18\" y=\"" << pix(0.5 * (kTop + kBottom))
     << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 "
     << "18 " << pix(0.5 * (kTop + kBottom)) << ")\">log10(value)</text>\n";
  const std::string title =
      (result.config.ansatz ? std::string("ansatz")
                            : modes::to_string(result.config.kind)) +
      " / " + korn::to_string(result.config.space);
  os << "<text x=\"" << pix(0.5 * (kLeft + kRight))
     << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
     << "</text>\n";

  if (pts.empty()) {
    os << "<text x=\"" << pix(0.5 * (kLeft + kRight)) << "\" y=\""
       << pix(0.5 * (kTop + kBottom))
       << "\" text-anchor=\"middle\" font-size=\"14\">no data</text>\n";
    os << "</svg>\n";
    return os.str();
  }

  double xmin = pts[0].first, xmax = pts[0].first;
  double ymin = pts[0].second, ymax = pts[0].second;
  for (const auto& [x, y] : pts) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  if (xmax - xmin < 1e-12) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  auto sx = [&](double x) {
    return kLeft + (x - xmin) / (xmax - xmin) * (kRight - kLeft);
  };
  auto sy = [&](double y) {
    return kBottom - (y - ymin) / (ymax - ymin) * (kBottom - kTop);
  };

  if (result.fit_ok) {
    constexpr double kLn10 = 2.302585092994046;
    auto fit_log10 = [&](double x10) {
      return (result.fit.intercept + result.fit.slope * (x10 * kLn10)) /
             kLn10;
    };
    os << "<line class=\"fit\" stroke=\"#c22\" stroke-width=\"1.5\" x1=\""
       << pix(sx(xmin)) << "\" y1=\"" << pix(sy(fit_log10(xmin)))
       << "\" x2=\"" << pix(sx(xmax)) << "\" y2=\""
       << pix(sy(fit_log10(xmax))) << "\"/>\n";
    os << "<text x=\"" << pix(kRight - 8.0) << "\" y=\"" << pix(kTop + 16.0)
       << "\" text-anchor=\"end\" font-size=\"13\">slope "
       << format17(result.fit.slope).substr(0, 7) << "</text>\n";
  }
  for (const auto& [x, y] : pts) {
    os << "<circle class=\"marker\" cx=\"" << pix(sx(x)) << "\" cy=\""
       << pix(sy(y)) << "\" r=\"4\" fill=\"#246\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) {
    throw IoError("failed while writing '" + path + "'");
  }
}

}  // namespace korn::sweep
