#ifndef EPISURV_SVG_HPP
#define EPISURV_SVG_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace episurv {

struct ScatterPoint {
    double x = 0.0;  // true value
    double y = 0.0;  // estimate
};

// 800x600 scatterplot with a y = x reference line. Points beyond the plot
// range (axes span the true values) are clipped to the border and drawn as
// open triangles.
void write_scatter_svg(const std::vector<ScatterPoint>& points, std::ostream& out,
                       const std::string& x_label = "true R0",
                       const std::string& y_label = "estimated R0");

}  // namespace episurv

#endif
