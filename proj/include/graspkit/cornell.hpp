#pragma once
// Cornell grasp annotations: one "x y" corner per line, four lines per
// rectangle. Files pair as pcdNNNNcpos.txt / pcdNNNNcneg.txt.
#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "graspkit/rect.hpp"

namespace graspkit {

struct ParsedRects {
  std::vector<GraspRect8> rects;  ///< CCW winding
  std::size_t dropped_nan = 0;    ///< rectangles with a NaN corner
};

/// Blank lines are skipped. Throws MalformedLine (LineError) for anything but
/// two numbers or NaNs, DanglingCorners when the corner count is not a
/// multiple of four, and DegeneratePolygon (LineError, first line of the
/// rectangle) for zero-area or non-convex quads.
ParsedRects parse_cornell_rects(std::string_view text);

struct AnnotationSet {
  std::string image_id;
  std::vector<GraspRect8> positives;
  std::vector<GraspRect8> negatives;
  std::size_t dropped_nan = 0;
};

AnnotationSet parse_cornell_annotations(std::string_view pos_text, std::string_view neg_text,
                                        std::string image_id = {});

/// Splits "pcd0100cpos.txt" into ("0100", "pos"). Returns false for other names.
bool split_cornell_name(const std::string& filename, std::string& image_id, std::string& tag);

/// Every pcdNNNNcpos.txt in `dir`, paired with its cneg file when present.
/// Parse errors are rethrown with the file path prepended.
std::map<std::string, AnnotationSet> scan_cornell_dir(const std::filesystem::path& dir);

/// Predictions: for each image, a file pcdNNNNc<tag>.txt with tag != "neg";
/// its first rectangle is the prediction. Two candidate files for one image
/// throw InvalidArgument; a file without rectangles throws EmptyTruthSet.
std::map<std::string, GraspRect8> load_prediction_dir(const std::filesystem::path& dir);

std::string read_text_file(const std::filesystem::path& path);

/// Writes rectangles in the Cornell grammar with 9 significant digits.
std::string format_cornell_rects(const std::vector<GraspRect8>& rects);

}  // namespace graspkit
