#include "mapf/viz.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace mapf {

void Trajectory::record(const Env& env) {
  positions.emplace_back(env.positions().begin(), env.positions().end());
  goals.emplace_back(env.goals().begin(), env.goals().end());
  active.emplace_back(env.active().begin(), env.active().end());
}

GlobalState Trajectory::snapshot(std::size_t t) const {
  if (!map) throw std::invalid_argument("trajectory has no map");
  if (t >= steps()) throw std::out_of_range("trajectory step out of range");
  GlobalState s;
  s.width = map->width();
  s.height = map->height();
  s.obstacles.assign(map->cells().begin(), map->cells().end());
  s.positions = positions[t];
  s.goals = goals[t];
  s.active = active[t];
  s.step = static_cast<int>(t);
  return s;
}

void Trajectory::validate() const {
  if (!map) throw std::invalid_argument("trajectory has no map");
  if (positions.empty()) throw std::invalid_argument("empty trajectory");
  if (goals.size() != positions.size() || active.size() != positions.size()) {
    throw std::invalid_argument("trajectory step counts differ");
  }
  const auto n = positions.front().size();
  for (std::size_t t = 0; t < positions.size(); ++t) {
    if (positions[t].size() != n || goals[t].size() != n || active[t].size() != n) {
      throw std::invalid_argument("trajectory agent count changes at step " + std::to_string(t));
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!map->in_bounds(positions[t][i]) || !map->in_bounds(goals[t][i])) {
        throw std::invalid_argument("trajectory cell outside the map at step " + std::to_string(t));
      }
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::array<const char*, 16> kPalette = {
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4", "#f032e6", "#bfef45",
    "#469990", "#9a6324", "#800000", "#808000", "#000075", "#e6beff", "#ffd8b1", "#aaffc3"};

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string num(int v) { return std::to_string(v); }

class SvgWriter {
 public:
  SvgWriter(int width, int height, const SvgStyle& style) : style_(style) {
    w_ = 2 * style.margin + width * style.cell_size;
    h_ = 2 * style.margin + height * style.cell_size;
    out_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(w_) + "\" height=\"" + num(h_) +
            "\" viewBox=\"0 0 " + num(w_) + " " + num(h_) + "\">\n";
    out_ += "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" + num(w_) + "\" height=\"" + num(h_) + "\" fill=\"" +
            style.background + "\"/>\n";
  }

  int x(int col) const { return style_.margin + col * style_.cell_size; }
  int y(int row) const { return style_.margin + row * style_.cell_size; }
  int cx(int col) const { return x(col) + style_.cell_size / 2; }
  int cy(int row) const { return y(row) + style_.cell_size / 2; }
  int radius() const { return std::max(1, style_.cell_size * 3 / 8); }
  int goal_size() const { return std::max(1, style_.cell_size / 2); }
  int goal_x(int col) const { return x(col) + (style_.cell_size - goal_size()) / 2; }
  int goal_y(int row) const { return y(row) + (style_.cell_size - goal_size()) / 2; }

  void map(int width, int height, std::span<const std::uint8_t> obstacles) {
    const auto cs = num(style_.cell_size);
    out_ += "<g class=\"cells\" fill=\"" + style_.free_fill + "\" stroke=\"" + style_.grid_stroke +
            "\" stroke-width=\"1\">\n";
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        out_ += "<rect class=\"cell\" x=\"" + num(x(c)) + "\" y=\"" + num(y(r)) + "\" width=\"" + cs + "\" height=\"" +
                cs + "\"/>\n";
      }
    }
    out_ += "</g>\n<g class=\"obstacles\" fill=\"" + style_.obstacle_fill + "\">\n";
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < width; ++c) {
        if (!obstacles[static_cast<std::size_t>(r) * static_cast<std::size_t>(width) + static_cast<std::size_t>(c)]) continue;
        out_ += "<rect class=\"obstacle\" x=\"" + num(x(c)) + "\" y=\"" + num(y(r)) + "\" width=\"" + cs +
                "\" height=\"" + cs + "\"/>\n";
      }
    }
    out_ += "</g>\n";
  }

  std::string& raw() { return out_; }

  std::string finish() {
    out_ += "</svg>\n";
    return std::move(out_);
  }

 private:
  const SvgStyle& style_;
  int w_ = 0;
  int h_ = 0;
  std::string out_;
};

void check_state(const GlobalState& s) {
  if (s.width <= 0 || s.height <= 0 ||
      s.obstacles.size() != static_cast<std::size_t>(s.width) * static_cast<std::size_t>(s.height)) {
    throw std::invalid_argument("snapshot raster does not match its dimensions");
  }
  if (s.goals.size() != s.positions.size() || s.active.size() != s.positions.size()) {
    throw std::invalid_argument("snapshot agent arrays differ in length");
  }
}

}  // namespace

std::string agent_color(std::size_t agent) {
  if (agent < kPalette.size()) return kPalette[agent];
  // Golden-angle hues beyond the fixed palette.
  const double hue = std::fmod(static_cast<double>(agent) * 137.508, 360.0) / 60.0;
  const double chroma = 0.65 * (1.0 - std::abs(2.0 * 0.5 - 1.0));
  const double second = chroma * (1.0 - std::abs(std::fmod(hue, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hue)) {
    case 0: r = chroma, g = second; break;
    case 1: r = second, g = chroma; break;
    case 2: g = chroma, b = second; break;
    case 3: g = second, b = chroma; break;
    case 4: r = second, b = chroma; break;
    default: r = chroma, b = second; break;
  }
  const double m = 0.5 - chroma / 2.0;
  char buf[8];
  auto byte = [&](double v) { return static_cast<unsigned>(std::lround((v + m) * 255.0)); };
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", byte(r), byte(g), byte(b));
  return buf;
}

std::string render_frame(const GlobalState& state, const SvgStyle& style) {
  check_state(state);
  SvgWriter svg(state.width, state.height, style);
  svg.map(state.width, state.height, state.obstacles);
  auto& out = svg.raw();
  if (style.ego_agent) {
    const auto a = static_cast<std::size_t>(*style.ego_agent);
    if (a >= state.positions.size()) throw std::out_of_range("ego agent index out of range");
    const Cell p = state.positions[a];
    const int side = (2 * style.ego_radius + 1) * style.cell_size;
    out += "<rect class=\"ego\" x=\"" + num(svg.x(p.col - style.ego_radius)) + "\" y=\"" +
           num(svg.y(p.row - style.ego_radius)) + "\" width=\"" + num(side) + "\" height=\"" + num(side) +
           "\" fill=\"" + agent_color(a) + "\" fill-opacity=\"0.15\" stroke=\"" + agent_color(a) +
           "\" stroke-width=\"2\"/>\n";
  }
  const auto gs = num(svg.goal_size());
  out += "<g class=\"goals\">\n";
  for (std::size_t i = 0; i < state.goals.size(); ++i) {
    if (!state.active[i]) continue;
    const Cell g = state.goals[i];
    out += "<rect class=\"goal\" x=\"" + num(svg.goal_x(g.col)) + "\" y=\"" + num(svg.goal_y(g.row)) + "\" width=\"" + gs +
           "\" height=\"" + gs + "\" fill=\"none\" stroke=\"" + agent_color(i) + "\" stroke-width=\"2\"/>\n";
  }
  out += "</g>\n<g class=\"agents\">\n";
  const auto r = num(svg.radius());
  for (std::size_t i = 0; i < state.positions.size(); ++i) {
    if (!state.active[i]) continue;
    const Cell p = state.positions[i];
    out += "<circle class=\"agent\" cx=\"" + num(svg.cx(p.col)) + "\" cy=\"" + num(svg.cy(p.row)) + "\" r=\"" + r +
           "\" fill=\"" + agent_color(i) + "\"/>\n";
  }
  out += "</g>\n";
  return svg.finish();
}

namespace {

struct Track {
  std::vector<std::string> values;
  bool changes = false;

  void push(std::string v) {
    if (!values.empty() && values.back() != v) changes = true;
    values.push_back(std::move(v));
  }
};

void emit_animate(std::string& out, const char* attribute, const Track& track, const std::string& key_times,
                  const std::string& dur, bool discrete) {
  if (!track.changes) return;
  out += "<animate attributeName=\"";
  out += attribute;
  out += "\" dur=\"" + dur + "\" fill=\"freeze\" keyTimes=\"" + key_times + "\" values=\"";
  for (std::size_t i = 0; i < track.values.size(); ++i) {
    if (i) out += ';';
    out += track.values[i];
  }
  out += '"';
  if (discrete) out += " calcMode=\"discrete\"";
  out += "/>\n";
}

}  // namespace

std::string render_animation(const Trajectory& trajectory, double step_duration, const SvgStyle& style) {
  trajectory.validate();
  if (!(step_duration > 0.0)) throw std::invalid_argument("step duration must be positive");
  const auto steps = trajectory.steps();
  if (steps == 1) return render_frame(trajectory.snapshot(0), style);

  const MapGrid& map = *trajectory.map;
  SvgWriter svg(map.width(), map.height(), style);
  svg.map(map.width(), map.height(), map.cells());
  auto& out = svg.raw();

  std::string key_times;
  for (std::size_t t = 0; t < steps; ++t) {
    if (t) key_times += ';';
    key_times += num(static_cast<double>(t) / static_cast<double>(steps - 1));
  }
  const std::string dur = num(step_duration * static_cast<double>(steps - 1)) + "s";
  const auto n = trajectory.positions.front().size();
  const auto gs = num(svg.goal_size());
  const auto r = num(svg.radius());

  out += "<g class=\"goals\">\n";
  for (std::size_t i = 0; i < n; ++i) {
    Track xs, ys, opacity;
    for (std::size_t t = 0; t < steps; ++t) {
      xs.push(num(svg.goal_x(trajectory.goals[t][i].col)));
      ys.push(num(svg.goal_y(trajectory.goals[t][i].row)));
      opacity.push(trajectory.active[t][i] ? "1" : "0");
    }
    out += "<rect class=\"goal\" x=\"" + xs.values.front() + "\" y=\"" + ys.values.front() + "\" width=\"" + gs +
           "\" height=\"" + gs + "\" fill=\"none\" stroke=\"" + agent_color(i) + "\" stroke-width=\"2\" opacity=\"" +
           opacity.values.front() + "\">\n";
    emit_animate(out, "x", xs, key_times, dur, true);
    emit_animate(out, "y", ys, key_times, dur, true);
    emit_animate(out, "opacity", opacity, key_times, dur, true);
    out += "</rect>\n";
  }
  out += "</g>\n<g class=\"agents\">\n";
  for (std::size_t i = 0; i < n; ++i) {
    Track xs, ys, opacity;
    for (std::size_t t = 0; t < steps; ++t) {
      xs.push(num(svg.cx(trajectory.positions[t][i].col)));
      ys.push(num(svg.cy(trajectory.positions[t][i].row)));
      opacity.push(trajectory.active[t][i] ? "1" : "0");
    }
    out += "<circle class=\"agent\" cx=\"" + xs.values.front() + "\" cy=\"" + ys.values.front() + "\" r=\"" + r +
           "\" fill=\"" + agent_color(i) + "\" opacity=\"" + opacity.values.front() + "\">\n";
    emit_animate(out, "cx", xs, key_times, dur, false);
    emit_animate(out, "cy", ys, key_times, dur, false);
    emit_animate(out, "opacity", opacity, key_times, dur, true);
    out += "</circle>\n";
  }
  out += "</g>\n";
  return svg.finish();
}

std::string render_console(const GlobalState& state) {
  check_state(state);
  const auto w = static_cast<std::size_t>(state.width);
  std::string grid(state.obstacles.size(), '.');
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (state.obstacles[i]) grid[i] = '#';
  }
  auto at = [&](Cell c) -> char& {
    return grid[static_cast<std::size_t>(c.row) * w + static_cast<std::size_t>(c.col)];
  };
  for (std::size_t i = 0; i < state.goals.size(); ++i) {
    if (state.active[i]) at(state.goals[i]) = '*';
  }
  constexpr std::string_view kGlyphs = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";
  for (std::size_t i = 0; i < state.positions.size(); ++i) {
    if (state.active[i]) at(state.positions[i]) = i < kGlyphs.size() ? kGlyphs[i] : '@';
  }
  std::string out;
  out.reserve(grid.size() + static_cast<std::size_t>(state.height));
  for (int r = 0; r < state.height; ++r) {
    if (r) out += '\n';
    out.append(grid, static_cast<std::size_t>(r) * w, w);
  }
  return out;
}

}  // namespace mapf
