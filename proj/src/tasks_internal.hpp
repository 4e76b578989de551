#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "spatialviz/dataset.hpp"
#include "spatialviz/tasks.hpp"

namespace spatialviz {

const nlohmann::ordered_json& level_params(TaskId task, int level);

namespace detail {

bool is_none(const Option& o);
/// Checks that exactly the answer passes. verdicts[i] is the oracle result
/// for option i; the none option is judged from the others.
void judge(const PuzzleInstance& inst, const std::vector<std::optional<bool>>& verdicts,
           std::vector<std::string>& errs);
void expect_image(const Option& o, const Document& rerendered, const std::string& what,
                  std::vector<std::string>& errs);
Option image_option(Document doc, std::string tag, std::string explanation, nlohmann::json model);
Option text_option(std::string text, std::string tag, std::string explanation, nlohmann::json model);
Option number_option(long long n, std::string tag, std::string explanation, nlohmann::json model);
bool distinct_images(const std::vector<const Document*>& docs);

inline void expect_reference(const PuzzleInstance& inst, std::size_t i, const Document& rerendered,
                             std::vector<std::string>& errs) {
  if (i >= inst.references.size()) {
    errs.push_back("missing reference image " + std::to_string(i));
    return;
  }
  Option o;
  o.image = inst.references[i];
  expect_image(o, rerendered, "reference " + std::to_string(i), errs);
}

inline std::string option_name(std::size_t i) { return std::string("option ") + static_cast<char>('A' + i); }

}  // namespace detail

}  // namespace spatialviz
