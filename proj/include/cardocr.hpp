#pragma once

#include "cardocr/binarize.hpp"
#include "cardocr/evaluation.hpp"
#include "cardocr/font.hpp"
#include "cardocr/geometry.hpp"
#include "cardocr/image.hpp"
#include "cardocr/pipeline.hpp"
#include "cardocr/pnm.hpp"
#include "cardocr/recognition.hpp"
#include "cardocr/regions.hpp"
#include "cardocr/segmentation.hpp"
#include "cardocr/skew.hpp"
#include "cardocr/synth.hpp"
#include "cardocr/template_store.hpp"
