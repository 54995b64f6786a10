#include "hybridscribe/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>

#include "hybridscribe/errors.hpp"

namespace hybridscribe {

double hybrid_score_step(double lm_logprob, double acoustic_logprob, double prior_logprob) {
  return lm_logprob + acoustic_logprob - prior_logprob;
}

namespace {

// Largest possible -prior term of a single step; the lm term is <= 0, so
// score_parent + acoustic_peek + prior_slack is an admissible bound on any
// future expansion of that parent.
double prior_slack(const MarginalPrior& prior) {
  double slack = 0.0;
  for (std::size_t j = 0; j < prior.probs.size(); ++j) {
    slack += std::max(-prior.log_p[j], -prior.log_q[j]);
  }
  return slack;
}

Vector posterior_row(const AcousticPosteriors& posteriors, std::size_t t) {
  return Vector(posteriors.probs.data.begin() + static_cast<long>(t * posteriors.probs.cols),
                posteriors.probs.data.begin() +
                    static_cast<long>((t + 1) * posteriors.probs.cols));
}

// Shared back-pointer chain so hypotheses don't copy whole sequences.
struct SeqNode {
  std::shared_ptr<const SeqNode> parent;
  std::vector<std::uint8_t> config;
};

PianoRoll materialize(const std::shared_ptr<const SeqNode>& tail, std::size_t t_frames,
                      std::size_t n_pitches, double hop_ms) {
  PianoRoll roll(t_frames, n_pitches, hop_ms);
  const SeqNode* node = tail.get();
  for (std::size_t t = t_frames; t-- > 0;) {
    for (std::size_t j = 0; j < n_pitches; ++j) roll.at(t, j) = node->config[j];
    node = node->parent.get();
  }
  return roll;
}

struct Hypothesis {
  double score = 0.0;
  std::shared_ptr<const SeqNode> tail;
  LmState lm_state;
};

struct Candidate {
  double score;
  std::vector<std::uint8_t> config;
  std::size_t parent;    // rank of the parent at this depth
  std::uint64_t seq_no;  // insertion order within the depth
};

// True if a ranks strictly better than b.
bool candidate_better(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.config != b.config) return config_tie_less(a.config, b.config);
  return a.seq_no < b.seq_no;
}

// Capacity-w queue retaining the w best candidates; worst is at the top.
class BeamQueue {
 public:
  explicit BeamQueue(std::size_t capacity) : capacity_(capacity) {}

  bool full() const { return heap_.size() >= capacity_; }
  const Candidate& worst() const { return heap_.top(); }

  void offer(Candidate&& c) {
    if (heap_.size() < capacity_) {
      heap_.push(std::move(c));
    } else if (candidate_better(c, heap_.top())) {
      heap_.pop();
      heap_.push(std::move(c));
    }
  }

  // Drains the queue best-first.
  std::vector<Candidate> drain_sorted() {
    std::vector<Candidate> out;
    out.reserve(heap_.size());
    while (!heap_.empty()) {
      out.push_back(heap_.top());
      heap_.pop();
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  struct WorstFirst {
    bool operator()(const Candidate& a, const Candidate& b) const {
      return candidate_better(a, b);
    }
  };
  std::size_t capacity_;
  std::priority_queue<Candidate, std::vector<Candidate>, WorstFirst> heap_;
};

DecodeResult run_beam(const AcousticPosteriors& posteriors, const LanguageModel& lm,
                      const MarginalPrior& prior, std::size_t width, std::size_t cap) {
  std::size_t t_frames = posteriors.probs.rows;
  std::size_t n = posteriors.probs.cols;
  if (n != lm.num_pitches() || n != prior.probs.size()) {
    throw dim_error("beam_search: posterior/lm/prior pitch counts disagree");
  }
  if (width == 0) throw config_error("beam_search: beam width must be >= 1");

  DecodeResult result;
  if (t_frames == 0) {
    result.roll = PianoRoll(0, n, posteriors.hop_ms);
    result.log_likelihood = 0.0;
    return result;
  }

  double slack = prior_slack(prior);
  std::vector<Hypothesis> beam;
  beam.push_back(Hypothesis{0.0, nullptr, lm.init_state()});

  for (std::size_t t = 0; t < t_frames; ++t) {
    Vector probs_row = posterior_row(posteriors, t);
    std::size_t n_parents = beam.size();
    std::vector<ConfigEnumerator> enumerators;
    std::vector<std::unique_ptr<LmStepScorer>> scorers;
    enumerators.reserve(n_parents);
    scorers.reserve(n_parents);
    for (const auto& h : beam) {
      enumerators.emplace_back(probs_row);
      scorers.push_back(lm.step_scorer(h.lm_state));
    }

    BeamQueue queue(width);
    std::vector<bool> active(n_parents, true);
    std::vector<std::size_t> expanded(n_parents, 0);
    std::size_t n_active = n_parents;
    std::uint64_t seq_no = 0;

    while (n_active > 0) {
      for (std::size_t i = 0; i < n_parents; ++i) {
        if (!active[i]) continue;
        if (queue.full()) {
          double bound = beam[i].score + enumerators[i].peek_log_prob() + slack;
          if (bound < queue.worst().score) {
            active[i] = false;
            --n_active;
            continue;
          }
        }
        auto emission = enumerators[i].next_most_probable();
        if (!emission) {
          active[i] = false;
          --n_active;
          continue;
        }
        double step = hybrid_score_step(scorers[i]->logprob(emission->config),
                                        emission->log_prob, prior.logprob(emission->config));
        Candidate cand;
        cand.score = beam[i].score + step;
        cand.config = std::move(emission->config);
        cand.parent = i;
        cand.seq_no = seq_no++;
        queue.offer(std::move(cand));
        if (++expanded[i] >= cap) {
          active[i] = false;
          --n_active;
        }
      }
    }

    std::vector<Candidate> kept = queue.drain_sorted();
    std::vector<Hypothesis> next;
    next.reserve(kept.size());
    for (const auto& c : kept) {
      Hypothesis h;
      h.score = c.score;
      auto node = std::make_shared<SeqNode>();
      node->parent = beam[c.parent].tail;
      node->config = c.config;
      h.tail = std::move(node);
      h.lm_state = lm.advance(beam[c.parent].lm_state, c.config);
      next.push_back(std::move(h));
    }
    beam = std::move(next);
  }

  const Hypothesis& best = beam.front();
  result.roll = materialize(best.tail, t_frames, n, posteriors.hop_ms);
  result.log_likelihood = best.score;
  return result;
}

}  // namespace

DecodeResult beam_search(const AcousticPosteriors& posteriors, const LanguageModel& lm,
                         const MarginalPrior& prior, const DecoderConfig& config) {
  return run_beam(posteriors, lm, prior, config.beam_width, config.effective_cap());
}

DecodeResult greedy_decode(const AcousticPosteriors& posteriors, const LanguageModel& lm,
                           const MarginalPrior& prior) {
  std::size_t t_frames = posteriors.probs.rows;
  std::size_t n = posteriors.probs.cols;
  if (n != lm.num_pitches() || n != prior.probs.size()) {
    throw dim_error("greedy_decode: posterior/lm/prior pitch counts disagree");
  }
  DecodeResult result;
  result.roll = PianoRoll(t_frames, n, posteriors.hop_ms);
  double slack = prior_slack(prior);
  constexpr std::size_t kGreedyCap = 2;  // beam width 1, default cap 2*w

  LmState state = lm.init_state();
  double total = 0.0;
  for (std::size_t t = 0; t < t_frames; ++t) {
    ConfigEnumerator en(posterior_row(posteriors, t));
    auto scorer = lm.step_scorer(state);
    bool have_best = false;
    double best_total = 0.0;  // cumulative, same arithmetic as the beam comparator
    std::vector<std::uint8_t> best_config;
    for (std::size_t k = 0; k < kGreedyCap; ++k) {
      if (have_best && total + en.peek_log_prob() + slack < best_total) break;
      auto emission = en.next_most_probable();
      if (!emission) break;
      double step = hybrid_score_step(scorer->logprob(emission->config), emission->log_prob,
                                      prior.logprob(emission->config));
      double cand_total = total + step;
      if (!have_best || cand_total > best_total ||
          (cand_total == best_total && config_tie_less(emission->config, best_config))) {
        have_best = true;
        best_total = cand_total;
        best_config = std::move(emission->config);
      }
    }
    for (std::size_t j = 0; j < n; ++j) result.roll.at(t, j) = best_config[j];
    total = best_total;
    state = lm.advance(state, best_config);
  }
  result.log_likelihood = total;
  return result;
}

namespace {

struct ExhaustiveBest {
  bool set = false;
  double score = 0.0;
  std::vector<std::vector<std::uint8_t>> seq;
};

void exhaustive_recurse(const AcousticPosteriors& posteriors, const LanguageModel& lm,
                        const MarginalPrior& prior, std::size_t t, double score_so_far,
                        std::vector<std::vector<std::uint8_t>>& prefix, const LmState& state,
                        ExhaustiveBest& best) {
  std::size_t t_frames = posteriors.probs.rows;
  std::size_t n = posteriors.probs.cols;
  if (t == t_frames) {
    if (!best.set || score_so_far > best.score) {
      best.set = true;
      best.score = score_so_far;
      best.seq = prefix;
    }
    return;
  }
  Vector row = posterior_row(posteriors, t);
  Vector log_on(n), log_off(n);
  for (std::size_t j = 0; j < n; ++j) {
    double p = clamp_prob(row[j]);
    log_on[j] = std::log(p);
    log_off[j] = std::log(1.0 - p);
  }
  auto scorer = lm.step_scorer(state);
  // configurations in tie order: descending binary value, pitch 0 the most
  // significant bit, so the first strict maximum wins ties
  std::vector<std::uint8_t> config(n);
  for (std::uint64_t code = (1ull << n); code-- > 0;) {
    double acoustic = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      config[j] = (code >> (n - 1 - j)) & 1ull ? 1 : 0;
      acoustic += config[j] ? log_on[j] : log_off[j];
    }
    double step = hybrid_score_step(scorer->logprob(config), acoustic, prior.logprob(config));
    prefix.push_back(config);
    exhaustive_recurse(posteriors, lm, prior, t + 1, score_so_far + step, prefix,
                       lm.advance(state, config), best);
    prefix.pop_back();
  }
}

}  // namespace

DecodeResult exhaustive_decode(const AcousticPosteriors& posteriors, const LanguageModel& lm,
                               const MarginalPrior& prior) {
  std::size_t t_frames = posteriors.probs.rows;
  std::size_t n = posteriors.probs.cols;
  if (n != lm.num_pitches() || n != prior.probs.size()) {
    throw dim_error("exhaustive_decode: posterior/lm/prior pitch counts disagree");
  }
  if (n * t_frames > 16) {
    throw config_error("exhaustive_decode: N*T = " + std::to_string(n * t_frames) +
                       " exceeds the 16-cell guard");
  }
  DecodeResult result;
  if (t_frames == 0) {
    result.roll = PianoRoll(0, n, posteriors.hop_ms);
    return result;
  }
  ExhaustiveBest best;
  std::vector<std::vector<std::uint8_t>> prefix;
  exhaustive_recurse(posteriors, lm, prior, 0, 0.0, prefix, lm.init_state(), best);
  result.roll = PianoRoll(t_frames, n, posteriors.hop_ms);
  for (std::size_t t = 0; t < t_frames; ++t) {
    for (std::size_t j = 0; j < n; ++j) result.roll.at(t, j) = best.seq[t][j];
  }
  result.log_likelihood = best.score;
  return result;
}

double rescore_roll(const PianoRoll& roll, const AcousticPosteriors& posteriors,
                    const LanguageModel& lm, const MarginalPrior& prior) {
  if (roll.frames != posteriors.probs.rows || roll.pitches != posteriors.probs.cols) {
    throw dim_error("rescore_roll: roll and posterior shapes disagree");
  }
  std::size_t n = roll.pitches;
  LmState state = lm.init_state();
  double total = 0.0;
  std::vector<std::uint8_t> config(n);
  for (std::size_t t = 0; t < roll.frames; ++t) {
    for (std::size_t j = 0; j < n; ++j) config[j] = roll.at(t, j);
    double acoustic = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double p = clamp_prob(posteriors.probs.at(t, j));
      acoustic += config[j] ? std::log(p) : std::log(1.0 - p);
    }
    total += hybrid_score_step(lm.step_logprob(state, config), acoustic, prior.logprob(config));
    state = lm.advance(state, config);
  }
  return total;
}

}  // namespace hybridscribe
