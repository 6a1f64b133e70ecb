#ifndef QSCATTER_FORMAT_HPP
#define QSCATTER_FORMAT_HPP

#include <string>

namespace qscatter {

// All floating-point output goes through this one formatter: scientific,
// 17 significant digits, so every double round-trips bit-exactly through
// text and files diff deterministically across runs.
std::string format_double(double v);

} // namespace qscatter

#endif
