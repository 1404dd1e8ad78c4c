#include "wmavmd/isolability.hpp"

#include <algorithm>
#include <tuple>

#include "wmavmd/error.hpp"
#include "wmavmd/vmd.hpp"

namespace wmavmd {

std::vector<const IsolabilityRow*> IsolabilityTable::column(std::size_t channel,
                                                            ModeClass mc) const {
  std::vector<const IsolabilityRow*> out;
  for (const auto& r : rows) {
    if (r.channel == channel && r.mode_class == mc) out.push_back(&r);
  }
  return out;
}

bool IsolabilityTable::non_increasing() const {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& prev = rows[k - 1];
    const auto& cur = rows[k];
    if (prev.channel == cur.channel && prev.mode_class == cur.mode_class &&
        cur.threshold > prev.threshold) {
      return false;
    }
  }
  return true;
}

bool IsolabilityTable::any_non_positive_owv() const {
  return std::any_of(rows.begin(), rows.end(), [](const auto& r) { return !r.owv_positive; });
}

IsolabilityTable isolability_table(const DetectorModel& model) {
  IsolabilityTable t;
  for (const auto& e : model.entries) {
    t.rows.push_back({e.channel, e.mode_class, e.window(), e.delta, e.phi,
                      e.isolability_threshold(), e.owv_positive});
  }
  // slip rows before slide rows
  std::sort(t.rows.begin(), t.rows.end(), [](const auto& a, const auto& b) {
    return std::make_tuple(a.channel, -static_cast<int>(a.mode_class), a.window) <
           std::make_tuple(b.channel, -static_cast<int>(b.mode_class), b.window);
  });
  return t;
}

WindowChoice select_window(const DetectorModel& model, std::size_t channel, ModeClass mc,
                           double f_check) {
  if (!(f_check > 0.0)) throw Error(ErrorKind::Config, "f_check must be positive");
  WindowChoice choice;
  bool have_closest = false;
  for (auto w : model.windows()) {
    const auto* e = model.find(channel, mc, w);
    if (!e) continue;
    const double gap = e->isolability_threshold() - f_check;
    if (f_check > e->isolability_threshold()) {
      choice.window = w;
      choice.closest_window = w;
      choice.closest_gap = gap;
      return choice;
    }
    if (!have_closest || gap < choice.closest_gap) {
      choice.closest_gap = gap;
      choice.closest_window = w;
      have_closest = true;
    }
  }
  return choice;
}

WindowSelection select_windows(const DetectorModel& model, std::span<const double> f_check,
                               std::map<std::pair<std::size_t, ModeClass>, WindowChoice>* report) {
  if (f_check.size() != 1 && f_check.size() != model.channels) {
    throw Error(ErrorKind::Config, "f_check needs one value or one per channel");
  }
  WindowSelection sel;
  for (std::size_t i = 0; i < model.channels; ++i) {
    const double f = f_check.size() == 1 ? f_check[0] : f_check[i];
    for (ModeClass mc : {ModeClass::Slip, ModeClass::Slide}) {
      bool trained = false;
      for (const auto& e : model.entries) trained |= e.channel == i && e.mode_class == mc;
      if (!trained) continue;
      const auto choice = select_window(model, i, mc, f);
      sel.set(i, mc, choice.window.value_or(choice.closest_window));
      if (report) (*report)[{i, mc}] = choice;
    }
  }
  return sel;
}

std::vector<ConditionPoint> check_conditions(const Trace& trace,
                                             std::span<const std::vector<double>> offsets,
                                             const DetectorModel& model,
                                             const WindowSelection& selection) {
  if (offsets.size() != trace.size()) {
    throw Error(ErrorKind::InputDomain, "one fault vector per frame is required");
  }
  const std::size_t p = model.input_channels();
  for (const auto& o : offsets) {
    if (o.size() != p) throw Error(ErrorKind::InputDomain, "fault vector has wrong channel count");
  }

  std::vector<ConditionPoint> out;
  std::vector<double> signed_offset(p), fault_vmd(p);
  for (const auto& seg : split_segments(trace)) {
    const int sign = sign_of(seg.mode_class);
    // VMD of the sign-adjusted fault vector and whether that vector is
    // non-constant, per frame of the run.
    std::vector<std::vector<double>> vmds(seg.size(), std::vector<double>(p));
    std::vector<char> nonconstant(seg.size()), nonzero(seg.size());
    for (std::size_t k = seg.begin; k < seg.end; ++k) {
      const auto& o = offsets[k];
      for (std::size_t c = 0; c < p; ++c) signed_offset[c] = sign * o[c];
      vmd_all(signed_offset, 1, fault_vmd);
      vmds[k - seg.begin] = fault_vmd;
      const auto [lo, hi] = std::minmax_element(o.begin(), o.end());
      nonconstant[k - seg.begin] = *lo != *hi;
      nonzero[k - seg.begin] = std::any_of(o.begin(), o.end(), [](double x) { return x != 0.0; });
    }
    for (std::size_t i = 0; i < model.channels; ++i) {
      const auto w = selection.get(i, seg.mode_class);
      const ModelEntry* e = w ? model.find(i, seg.mode_class, *w) : nullptr;
      if (!e) continue;
      const std::size_t W = e->window();
      for (std::size_t k = W - 1; k < seg.size(); ++k) {
        bool faulty = false, detectable = false;
        for (std::size_t j = 0; j < W; ++j) {
          faulty |= nonzero[k - j] != 0;
          detectable |= nonconstant[k - j] != 0;
        }
        if (!faulty) continue;
        ConditionPoint cp;
        cp.frame = seg.begin + k;
        cp.channel = i;
        cp.mode_class = seg.mode_class;
        cp.window = W;
        cp.fault_index = wma_at(std::span<const double>(e->weights.weights),
                                [&](std::size_t j) { return vmds[k - j][i]; });
        cp.threshold = e->isolability_threshold();
        cp.necessary_isolability = cp.fault_index != 0.0;
        cp.necessary_detectability = detectable;
        cp.sufficient_isolability = cp.fault_index > cp.threshold;
        cp.conditional = !e->owv_positive;
        out.push_back(cp);
      }
    }
  }
  return out;
}

}  // namespace wmavmd
