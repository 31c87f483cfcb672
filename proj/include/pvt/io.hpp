#pragma once

#include <string>
#include <vector>

#include "pvt/geometry.hpp"
#include "pvt/nulldist.hpp"
#include "pvt/tda.hpp"

namespace pvt {

// {"window": [w, h], "cells": [{"vertices": [[x, y], ...],
//  "visibility": "complete" | "clipped", "generator": id}, ...]}
std::string tessellation_to_json(const SectionTessellation& tess);
SectionTessellation tessellation_from_json(const std::string& text);
void save_tessellation(const std::string& path, const SectionTessellation& tess);
SectionTessellation load_tessellation(const std::string& path);

// CSV with header cell_id,x,y: one vertex (or point) per row.
void save_points_csv(const std::string& path,
                     const std::vector<std::pair<int, Vec2>>& rows);
std::vector<std::pair<int, Vec2>> load_points_csv(const std::string& path);

void save_metrics_csv(const std::string& path,
                      const std::vector<CellMetrics>& metrics);

// CSV with header dimension,birth,death.
void save_diagram_csv(const std::string& path, const PersistenceDiagram& diag);

// CSV with header k,t,value: one breakpoint per row.
void save_landscape_csv(const std::string& path, const Landscape& landscape);

// CSV with header alpha,value.
void save_quantile_csv(const std::string& path, const QuantileTable& table);

void save_null_table(const std::string& path, const NullTable& table);
NullTable load_null_table(const std::string& path);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace pvt
