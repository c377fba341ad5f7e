#include "loglshd/synthetic.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "loglshd/corpus_io.hpp"
#include "loglshd/csv.hpp"
#include "loglshd/hashing.hpp"

namespace loglshd {
namespace {

enum class NumericKind { Integer, BlockId, Hex, Ipv4, Duration, Path, RddId };
constexpr std::size_t kNumericKinds = 7;

struct Slot {
  bool alphabetic = false;
  NumericKind kind = NumericKind::Integer;
  std::vector<std::string> pool;  // alphabetic values
};

struct TemplateRecipe {
  // Static words, with a slot index (or -1) after each word.
  std::vector<std::string> words;
  std::vector<int> slot_after;
  std::vector<Slot> slots;
  std::string text;
};

std::string random_word(SplitMix64& rng, std::size_t min_len, std::size_t max_len) {
  const std::size_t len = min_len + rng.below(max_len - min_len + 1);
  std::string w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(static_cast<char>('a' + rng.below(26)));
  return w;
}

std::string unique_word(SplitMix64& rng, std::unordered_set<std::string>& used,
                        std::size_t min_len = 3, std::size_t max_len = 9) {
  for (;;) {
    std::string w = random_word(rng, min_len, max_len);
    if (used.insert(w).second) return w;
  }
}

std::string numeric_value(NumericKind kind, SplitMix64& rng) {
  char buf[96];
  switch (kind) {
    case NumericKind::Integer:
      std::snprintf(buf, sizeof buf, "%llu",
                    static_cast<unsigned long long>(1 + rng.below(999999)));
      break;
    case NumericKind::BlockId:
      std::snprintf(buf, sizeof buf, "blk_%s%llu", rng.below(2) ? "-" : "",
                    static_cast<unsigned long long>(
                        1000000000ULL + rng.below(8999999999ULL)));
      break;
    case NumericKind::Hex:
      std::snprintf(buf, sizeof buf, "0x%08llx",
                    static_cast<unsigned long long>(rng.below(1ULL << 32)));
      break;
    case NumericKind::Ipv4:
      std::snprintf(buf, sizeof buf, "%u.%u.%u.%u",
                    static_cast<unsigned>(rng.below(256)),
                    static_cast<unsigned>(rng.below(256)),
                    static_cast<unsigned>(rng.below(256)),
                    static_cast<unsigned>(rng.below(256)));
      break;
    case NumericKind::Duration:
      std::snprintf(buf, sizeof buf, "%llums",
                    static_cast<unsigned long long>(rng.below(100000)));
      break;
    case NumericKind::Path:
      std::snprintf(buf, sizeof buf, "/data/%llu/part-%05llu",
                    static_cast<unsigned long long>(rng.below(1000)),
                    static_cast<unsigned long long>(rng.below(100000)));
      break;
    case NumericKind::RddId:
      std::snprintf(buf, sizeof buf, "rdd_%llu_%llu",
                    static_cast<unsigned long long>(rng.below(1000)),
                    static_cast<unsigned long long>(rng.below(1000)));
      break;
  }
  return buf;
}

}  // namespace

VariableAlphabet parse_alphabet(std::string_view name) {
  if (name == "numeric" || name == "non-alphabetic") return VariableAlphabet::NonAlphabetic;
  if (name == "alphabetic") return VariableAlphabet::Alphabetic;
  if (name == "mixed") return VariableAlphabet::Mixed;
  throw std::invalid_argument("unknown variable alphabet '" + std::string(name) +
                              "' (numeric | alphabetic | mixed)");
}

std::string_view to_string(VariableAlphabet alphabet) noexcept {
  switch (alphabet) {
    case VariableAlphabet::NonAlphabetic: return "numeric";
    case VariableAlphabet::Alphabetic: return "alphabetic";
    case VariableAlphabet::Mixed: return "mixed";
  }
  return "?";
}

void SyntheticSpec::validate() const {
  if (n_templates == 0 || logs_per_template == 0) {
    throw std::invalid_argument("synthetic corpus needs templates and logs");
  }
  if (min_words == 0 || max_words < min_words) {
    throw std::invalid_argument("need 1 <= min_words <= max_words");
  }
  if (slots_per_template > min_words) {
    throw std::invalid_argument(
        "slots_per_template cannot exceed min_words (slots must not touch)");
  }
  if (alphabet != VariableAlphabet::NonAlphabetic && alphabetic_pool < 2) {
    throw std::invalid_argument("alphabetic_pool must be >= 2");
  }
}

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  SplitMix64 rng(derive_seed(spec.seed, "synthetic"));
  std::unordered_set<std::string> used;

  std::vector<TemplateRecipe> recipes(spec.n_templates);
  for (std::size_t t = 0; t < spec.n_templates; ++t) {
    TemplateRecipe& r = recipes[t];
    const std::size_t n_words =
        spec.min_words + rng.below(spec.max_words - spec.min_words + 1);

    std::string lead;
    do {
      lead = std::string(1, static_cast<char>('A' + t % 26)) + random_word(rng, 2, 7);
    } while (!used.insert(lead).second);
    r.words.push_back(lead);
    for (std::size_t w = 1; w < n_words; ++w) r.words.push_back(unique_word(rng, used));

    // Each slot follows a distinct word, so slots never touch.
    std::vector<std::size_t> order(n_words);
    for (std::size_t i = 0; i < n_words; ++i) order[i] = i;
    for (std::size_t i = n_words; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    r.slot_after.assign(n_words, -1);
    for (std::size_t s = 0; s < spec.slots_per_template; ++s) {
      r.slot_after[order[s]] = 0;
    }
    int next_slot = 0;
    for (auto& v : r.slot_after) {
      if (v < 0) continue;
      v = next_slot++;
      Slot slot;
      slot.alphabetic =
          spec.alphabet == VariableAlphabet::Alphabetic ||
          (spec.alphabet == VariableAlphabet::Mixed && v % 2 == 1);
      if (slot.alphabetic) {
        for (std::size_t p = 0; p < spec.alphabetic_pool; ++p) {
          slot.pool.push_back(unique_word(rng, used, 4, 8));
        }
      } else {
        slot.kind = static_cast<NumericKind>(rng.below(kNumericKinds));
      }
      r.slots.push_back(std::move(slot));
    }

    for (std::size_t w = 0; w < n_words; ++w) {
      if (w) r.text += ' ';
      r.text += r.words[w];
      if (r.slot_after[w] >= 0) {
        r.text += ' ';
        r.text += kPlaceholder;
      }
    }
  }

  SyntheticCorpus corpus;
  corpus.log_format = "<Date> <Time> <Level> <Content>";
  for (const auto& r : recipes) corpus.templates.push_back(r.text);

  const std::size_t total = spec.n_templates * spec.logs_per_template;
  corpus.template_of.reserve(total);
  for (std::size_t t = 0; t < spec.n_templates; ++t) {
    corpus.template_of.insert(corpus.template_of.end(), spec.logs_per_template, t);
  }
  for (std::size_t i = total; i > 1; --i) {
    std::swap(corpus.template_of[i - 1], corpus.template_of[rng.below(i)]);
  }

  static constexpr const char* kLevels[] = {"INFO", "WARN", "ERROR", "DEBUG"};
  corpus.contents.reserve(total);
  corpus.lines.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    const TemplateRecipe& r = recipes[corpus.template_of[i]];
    std::string content;
    for (std::size_t w = 0; w < r.words.size(); ++w) {
      if (w) content += ' ';
      content += r.words[w];
      if (r.slot_after[w] >= 0) {
        const Slot& slot = r.slots[static_cast<std::size_t>(r.slot_after[w])];
        content += ' ';
        content += slot.alphabetic ? slot.pool[rng.below(slot.pool.size())]
                                   : numeric_value(slot.kind, rng);
      }
    }
    const std::size_t seconds = i;
    char header[64];
    std::snprintf(header, sizeof header, "2025-02-%02zu %02zu:%02zu:%02zu %s ",
                  1 + (seconds / 86400) % 28, (seconds / 3600) % 24,
                  (seconds / 60) % 60, seconds % 60, kLevels[rng.below(4)]);
    corpus.lines.push_back(header + content);
    corpus.contents.push_back(std::move(content));
  }
  return corpus;
}

SyntheticFiles write_synthetic(const SyntheticCorpus& corpus,
                               const std::filesystem::path& dir,
                               std::string_view name) {
  std::filesystem::create_directories(dir);
  SyntheticFiles files{dir / (std::string(name) + ".log"),
                       dir / (std::string(name) + "_structured.csv")};
  {
    std::string buffer;
    for (const auto& line : corpus.lines) {
      buffer += line;
      buffer += '\n';
    }
    std::ofstream out(files.log, std::ios::binary | std::ios::trunc);
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    if (!out) throw std::runtime_error("failed writing " + files.log.string());
  }
  {
    std::string buffer = "LineId,Content,EventId,EventTemplate\n";
    for (std::size_t i = 0; i < corpus.lines.size(); ++i) {
      const std::size_t t = corpus.template_of[i];
      buffer += std::to_string(i + 1);
      buffer += ',';
      buffer += csv::escape(corpus.contents[i]);
      buffer += ",E";
      buffer += std::to_string(t + 1);
      buffer += ',';
      buffer += csv::escape(corpus.templates[t]);
      buffer += '\n';
    }
    std::ofstream out(files.ground_truth, std::ios::binary | std::ios::trunc);
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    if (!out) {
      throw std::runtime_error("failed writing " + files.ground_truth.string());
    }
  }
  return files;
}

}  // namespace loglshd
