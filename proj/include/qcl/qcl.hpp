#ifndef QCL_QCL_HPP
#define QCL_QCL_HPP

#include "qcl/classifier.hpp"
#include "qcl/core.hpp"
#include "qcl/csv.hpp"
#include "qcl/dataset.hpp"
#include "qcl/distributions.hpp"
#include "qcl/errors.hpp"
#include "qcl/experiment.hpp"
#include "qcl/model_io.hpp"
#include "qcl/rng.hpp"
#include "qcl/simgen.hpp"
#include "qcl/skewness.hpp"
#include "qcl/special.hpp"
#include "qcl/standardize.hpp"
#include "qcl/theory.hpp"

#endif  // QCL_QCL_HPP
